//! Automata-based tooling for sequences defined by exotic numeration systems.
//!
//! The crate provides, bottom to top:
//!
//! * [`automata`] — multi-track DFA/NFA/DFAO values and the closed set of
//!   operations (boolean combinations, projection, determinization,
//!   minimization, padding saturation, text I/O) everything else is built on;
//! * [`numeration`] — positional numeration systems defined by a linear
//!   recurrence basis, most notably the `msd_kim` system with basis
//!   1, 3, 8, 22, 60, … and digit alphabet {0, 1, 2};
//! * [`oracles`] — direct, definition-level computation of the sequences the
//!   tool reasons about (morphism fixed points, position sequences, nonlinear
//!   recurrences), used as ground truth everywhere;
//! * [`inference`] — inference of minimal synchronized automata from
//!   brute-force samples, with a stabilization check;
//! * [`logic`] — a first-order query language over a numeration system,
//!   compiled to automata (quantifiers become projections, connectives become
//!   products), plus a small script language driving it;
//! * [`reproduction`] — the packaged verification suites: scripts, support
//!   automata, combinatorics-on-words analyses, and theorem reports.

pub mod automata;
pub mod inference;
pub mod logic;
pub mod numeration;
pub mod oracles;
pub mod reproduction;
