// SPDX-License-Identifier: Apache-2.0

//! Recovers the irreducible polynomial of a gate-level GF(2^m) multiplier.
//!
//! Each output bit is rewritten, gate by gate from the output back to the
//! operands, into its unique GF(2) polynomial over the input bits
//! ([`rewriter`]). The field polynomial is read off from which bits contain
//! the full set of products `a_i b_j` with `i + j = m` ([`extractor`]), and
//! the design is then compared with a golden multiplier built from the
//! recovered polynomial ([`generator`], [`verify`]).
//!
//! ```
//! use gfextract::{extractor::IrrPoly, generator, verify};
//!
//! let p = IrrPoly::parse_list("8,4,3,1,0").unwrap();
//! let netlist = generator::gen_mastrovito(&p, Default::default());
//! let report = verify::full_pipeline(&netlist, 2).unwrap();
//! assert_eq!(report.recovered(), Some(&p));
//! assert_eq!(report.verdict.status, verify::Status::Equivalent);
//! ```

pub mod bitpoly;
pub mod cli;
pub mod extractor;
pub mod generator;
pub mod gfpoly;
pub mod netlist;
pub mod report;
pub mod rewriter;
pub mod verify;
