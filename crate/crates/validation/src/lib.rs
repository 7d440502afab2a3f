//! Holds the `acceptance` test target; run it with
//! `cargo test -p vmoments-validation --test acceptance`.
//!
//! It lives in its own package so that a red criterion does not stop the
//! other test binaries under `cargo test --workspace`.
