//! Block transforms: counts, enumeration and tape round trips.
//!
//! cargo run --release --example transforms -- [k] [b]

use tm_universality::transform::{
    decode_tape, encode_tape, enumerate_transforms, injective_count, transform_count, BlockTransform,
};
use tm_universality::Symbol;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let k = args.first().copied().unwrap_or(3);
    let b = args.get(1).copied().unwrap_or(2);

    println!("k={k} b={b}: {} maps, {} injective", transform_count(k, b)?, injective_count(k, b)?);
    let ts = enumerate_transforms(k, b, true)?;
    for t in ts.iter().take(5) {
        println!("  id {:>6}  {t}", t.id());
    }

    // the 0->12 1->20 2->22 example
    let t = BlockTransform::new(
        3,
        vec![vec![Symbol(1), Symbol(2)], vec![Symbol(2), Symbol(0)], vec![Symbol(2), Symbol(2)]],
    )?;
    let tape = [Symbol(0), Symbol(1), Symbol(2)];
    let encoded = encode_tape(&t, &tape);
    let text: String = encoded.iter().map(|s| s.to_digit()).collect();
    println!("{t} (id {}) encodes 012 as {text}", t.id());
    assert_eq!(decode_tape(&t, &encoded)?, tape);
    let bad = [Symbol(0), Symbol(0)];
    println!("decoding 00: {}", decode_tape(&t, &bad).unwrap_err());
    Ok(())
}
