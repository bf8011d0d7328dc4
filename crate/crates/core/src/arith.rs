//! Arithmeticity decisions and commensurability invariants.
//!
//! For an integral jigsaw group the invariant trace field is `Q`, so the
//! group is non-arithmetic as soon as one element has `(tr)² ∉ Z`, and
//! arithmetic as soon as `(tr)² ∈ Z` on a generating set of the
//! even-length subgroup `Γ⁽²⁾ = ⟨ι₀ι₁, …, ι₀ι_{N+1}⟩`. The candidates
//! tested are exactly those generators together with the products
//! `h_j·h_k` of π-rotations in the strip's exterior vertical sides, whose
//! squared traces obey closed forms in the foot distance `m_j − m_k`.
//!
//! The tangency pattern is the cyclic sequence of gaps between the
//! non-type-1 exterior vertical sides (the self-tangency sites of the
//! maximal horocycle) with their labels; for a non-arithmetic group in the
//! families covered here the group equals its own commensurator, so
//! differing patterns separate commensurability classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cuspset::{ClassificationReport, Family, Verdict};
use crate::develop::CuspStrip;
use crate::exact::GroupElement;
use crate::jigsaw::{Jigsaw, JigsawGroup};
use crate::tiles::SideIndex;

/// Result of the squared-trace integrality test.
#[derive(Debug, Clone)]
pub enum ArithOutcome {
    /// Every candidate has integral squared trace; the squared traces of
    /// the `Γ⁽²⁾` generators are listed.
    Arithmetic { traces: Vec<BigRational> },
    /// A candidate with non-integral squared trace.
    NonArithmetic { witness: GroupElement, trace_sq: BigRational },
}

impl ArithOutcome {
    pub fn is_arithmetic(&self) -> bool {
        matches!(self, ArithOutcome::Arithmetic { .. })
    }
}

/// Generators `ι₀ι_i`, `i = 1, …, N+1`, of the even-length subgroup.
pub fn gamma2_generators(g: &JigsawGroup) -> Vec<GroupElement> {
    let gens = g.generators();
    gens[1..].iter().map(|h| gens[0].compose(h)).collect()
}

/// Decide arithmeticity of an integral jigsaw group from the squared
/// traces of the `Γ⁽²⁾` generators and of the strip rotation products.
pub fn arithmeticity_check(g: &JigsawGroup, strip: &CuspStrip) -> ArithOutcome {
    assert!(g.jigsaw().is_integral(), "trace test requires an integral jigsaw");
    let mut traces = Vec::new();
    for gamma in gamma2_generators(g) {
        let t2 = gamma.trace_squared();
        if !t2.is_integer() {
            return ArithOutcome::NonArithmetic { witness: gamma, trace_sq: t2 };
        }
        traces.push(t2);
    }
    let rotations: Vec<&GroupElement> = strip
        .verticals
        .iter()
        .filter(|v| v.exterior)
        .map(|v| &v.rotation)
        .collect();
    for (i, hj) in rotations.iter().enumerate() {
        for hk in rotations.iter().skip(i + 1) {
            let prod = hj.compose(hk);
            let t2 = prod.trace_squared();
            if !t2.is_integer() {
                return ArithOutcome::NonArithmetic { witness: prod, trace_sq: t2 };
            }
        }
    }
    ArithOutcome::Arithmetic { traces }
}

/// Why an S(1,3) jigsaw fails to decompose into `J_A` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockObstruction {
    /// No `Δ⁽¹⁾` core tile at all.
    NoCore,
    /// A boundary side carries label 1 (all block sides are type 3).
    BoundarySideNotType3,
    /// A vertex J-width is not divisible by 3.
    JWidthNotDivisibleBy3,
    /// A tile is not attached to a core the way `J_A` requires.
    TileNotAttachedToCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockDecomposition {
    /// The jigsaw is `count` copies of `J_A` glued along matching sides.
    JABlocks { count: usize },
    NotDecomposable(BlockObstruction),
}

/// Greedy `J_A`-block decomposition of an S(1,3) jigsaw: every `Δ⁽¹⁾` must
/// have `Δ⁽³⁾` tiles on all three sides and every `Δ⁽³⁾` must hang off a
/// core by its label-1 side; the block count is then the number of cores.
pub fn s13_block_decomposition(j: &Jigsaw) -> BlockDecomposition {
    let one = BigInt::one();
    let three = BigInt::from(3);
    let is_d1 = |i: usize| j.tile(i).integral() == Some(one.clone());
    let cores: Vec<usize> = (0..j.size()).filter(|&i| is_d1(i)).collect();
    if cores.is_empty() {
        return BlockDecomposition::NotDecomposable(BlockObstruction::NoCore);
    }
    if j.boundary().iter().any(|b| b.label.is_one()) {
        return BlockDecomposition::NotDecomposable(BlockObstruction::BoundarySideNotType3);
    }
    if j.vertices().iter().any(|v| {
        v.jwidth
            .as_ref()
            .is_none_or(|w| !(w % &three).is_zero())
    }) {
        return BlockDecomposition::NotDecomposable(BlockObstruction::JWidthNotDivisibleBy3);
    }
    for i in 0..j.size() {
        if is_d1(i) {
            // all three sides glued to Δ⁽³⁾ tiles
            let ok = SideIndex::ALL
                .iter()
                .all(|&s| matches!(j.glued_to(i, s), Some((t, _)) if !is_d1(t)));
            if !ok {
                return BlockDecomposition::NotDecomposable(BlockObstruction::TileNotAttachedToCore);
            }
        } else {
            // the label-1 side (canonical side 1 of Δ⁽³⁾) must meet a core
            let ok = matches!(j.glued_to(i, SideIndex::S1), Some((t, _)) if is_d1(t));
            if !ok {
                return BlockDecomposition::NotDecomposable(BlockObstruction::TileNotAttachedToCore);
            }
        }
    }
    BlockDecomposition::JABlocks { count: cores.len() }
}

/// Cyclic gap/label sequence of the maximal horocycle's tangency sites:
/// the exterior vertical sides with label ≠ 1, read over one period,
/// stored in the lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangencyPattern {
    /// `(gap to the next site rightward, label of this site)`; total gap
    /// equals the fundamental length. Empty when every side is type 1.
    pub entries: Vec<(BigInt, BigRational)>,
}

impl TangencyPattern {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Read the tangency pattern off the cusp strip of an integral jigsaw.
pub fn tangency_pattern(g: &JigsawGroup, strip: &CuspStrip) -> TangencyPattern {
    assert!(g.jigsaw().is_integral());
    let end = &strip.window_start + &strip.length;
    // sites in one period, ascending
    let mut sites: Vec<(BigInt, BigRational)> = strip
        .verticals
        .iter()
        .filter(|v| v.exterior && !v.label.is_one() && v.foot >= strip.window_start && v.foot < end)
        .map(|v| (v.foot.to_integer(), v.label.clone()))
        .collect();
    sites.sort();
    if sites.is_empty() {
        return TangencyPattern { entries: Vec::new() };
    }
    let length = strip.length.to_integer();
    let n = sites.len();
    let entries: Vec<(BigInt, BigRational)> = (0..n)
        .map(|i| {
            let gap = if i + 1 < n {
                &sites[i + 1].0 - &sites[i].0
            } else {
                &length - (&sites[n - 1].0 - &sites[0].0)
            };
            (gap, sites[i].1.clone())
        })
        .collect();
    // canonical rotation: least by (gap, label-key) lexicographic order
    let key = |e: &(BigInt, BigRational)| {
        (e.0.clone(), e.1.numer().clone(), e.1.denom().clone())
    };
    let best = (0..n)
        .min_by_key(|&r| (0..n).map(|i| key(&entries[(r + i) % n])).collect::<Vec<_>>())
        .unwrap();
    TangencyPattern {
        entries: (0..n).map(|i| entries[(best + i) % n].clone()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commensurability {
    /// The groups lie in different commensurability classes.
    Distinct,
    /// The invariant does not separate them; nothing is claimed.
    NotDistinguished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("commensurability comparison is only claimed for non-arithmetic S(1,2) signature (r,1) jigsaws and the three-Δ⁽³⁾ S(1,3) family")]
pub struct FamilyOutOfScope;

fn minimal_family(r: &ClassificationReport) -> bool {
    if r.verdict != Verdict::Pseudomodular && r.verdict != Verdict::NonArithmeticWithSpecials {
        return false;
    }
    match r.family {
        Family::S12 => {
            // signature (r, 1): exactly one Δ⁽²⁾
            r.signature
                .iter()
                .any(|(t, m)| t.integral() == Some(BigInt::from(2)) && *m == 1)
        }
        Family::S13 => {
            // the J′ ∪ J_n family: three Δ⁽³⁾ tiles and specials
            r.verdict == Verdict::NonArithmeticWithSpecials
                && r.signature
                    .iter()
                    .any(|(t, m)| t.integral() == Some(BigInt::from(3)) && *m == 3)
        }
        _ => false,
    }
}

/// Compare tangency patterns of two groups for which the group equals its
/// own commensurator. Never claims commensurability, only distinctness.
pub fn commensurability_distinct(
    a: &ClassificationReport,
    b: &ClassificationReport,
) -> Result<Commensurability, FamilyOutOfScope> {
    if !minimal_family(a) || !minimal_family(b) {
        return Err(FamilyOutOfScope);
    }
    let (Some(pa), Some(pb)) = (&a.tangency, &b.tangency) else {
        return Err(FamilyOutOfScope);
    };
    if pa != pb || a.length != b.length {
        Ok(Commensurability::Distinct)
    } else {
        Ok(Commensurability::NotDistinguished)
    }
}
