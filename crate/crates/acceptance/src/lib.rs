//! Holds the `acceptance` test target; run it with
//! `cargo test -p tm-universality-acceptance`.
