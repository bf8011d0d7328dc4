//! Exact-arithmetic construction and classification of hyperbolic jigsaw
//! groups.
//!
//! A jigsaw is an ideal polygon glued from marked ideal triangle tiles
//! `Δ(k₁,k₂,k₃)` along sides with matching parameters; its group is generated
//! by the π-rotations about the marked points of the boundary sides. This
//! crate builds those groups over exact rationals and decides, for the
//! integral families it supports, whether a group is arithmetic,
//! pseudomodular, or has specials (rational fixed points of hyperbolic
//! elements), together with checkable witnesses for every verdict.
//!
//! Module layout mirrors the pipeline:
//!
//! - [`exact`]: projective rationals and `(1/√d)·M` matrices
//! - [`tiles`]: marked triangles, standard involutions, matching
//! - [`jigsaw`]: assembly, developing, generators, census
//! - [`develop`]: cusp strips, ray tracing, the special-producing cycle
//! - [`cuspset`]: killer intervals, covers, point reduction, verdicts
//! - [`arith`]: arithmeticity and commensurability invariants

pub mod arith;
pub mod cuspset;
pub mod develop;
pub mod exact;
pub mod jigsaw;
pub mod tiles;

pub use cuspset::{classify_group, ClassificationReport, Verdict};
pub use exact::{ExtendedRational, GroupElement, Word};
pub use jigsaw::{
    assemble, census, group, parse_spec, weierstrass, Jigsaw, JigsawGroup, JigsawSpec,
};
pub use tiles::{SideIndex, TileType};

