//! Holds the end-to-end acceptance target (`cargo test -p qbarcode-validation`).
//! The checks live in `tests/acceptance.rs`; this library is empty.
