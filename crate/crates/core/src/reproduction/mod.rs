//! Theorem-by-theorem verification suites.
