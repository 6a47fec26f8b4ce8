//! Holds the `acceptance` test target; run it with
//! `cargo test -p movcone-validation --test acceptance`.
