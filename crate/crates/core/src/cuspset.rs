//! Killer intervals, covers of the fundamental interval, point
//! classification, and the group-level verdict.
//!
//! For `g ∈ Γ` with integer matrix `[[α, β], [γ, δ]]`, `gcd(α,γ) = k` and
//! `α = kα'`, `γ = kγ'`, every `p/q` strictly inside the open interval of
//! radius `1/(k|γ'|)` about the cusp `g(∞) = α'/γ'` satisfies: the
//! denominator of `g⁻¹(p/q)` is strictly smaller than `q`. Covering one
//! fundamental interval `[c, c+L]` by finitely many killer intervals
//! therefore proves that every rational is a cusp; isolated uncovered
//! points are decided by exact ray tracing (cusp when the ray hits a
//! vertex of the triangulation, special when its cutting sequence repeats
//! and the repeat witness is hyperbolic).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{self, ArithOutcome, TangencyPattern};
use crate::develop::{cusp_strip, trace_ray, CuspStrip, RayOutcome, Special, Witness};
use crate::exact::{ExtendedRational, GroupElement, Word};
use crate::jigsaw::{Jigsaw, JigsawGroup};
use crate::tiles::TileType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuspSetError {
    #[error("element fixes ∞ and has no killer interval")]
    FixesInfinity,
}

/// Open interval about a cusp inside which the witness inverse strictly
/// decreases denominators.
#[derive(Debug, Clone)]
pub struct KillerInterval {
    pub center: ExtendedRational,
    pub radius: BigRational,
    /// Contraction constant `k = gcd` of the witness's first column.
    pub contraction: BigInt,
    pub witness: GroupElement,
    /// Word of the witness in the boundary generators, when known.
    pub word: Option<Word>,
}

impl KillerInterval {
    pub fn low(&self) -> BigRational {
        self.center.to_rational().expect("killer centers are finite") - &self.radius
    }

    pub fn high(&self) -> BigRational {
        self.center.to_rational().expect("killer centers are finite") + &self.radius
    }

    /// Strict interior membership; endpoints never count.
    pub fn contains(&self, x: &BigRational) -> bool {
        let c = self.center.to_rational().expect("killer centers are finite");
        (x - c).abs() < self.radius
    }
}

/// Killer interval of `g` about `g(∞)`, from the first column of the
/// canonical matrix.
pub fn killer_interval(g: &GroupElement) -> Result<KillerInterval, CuspSetError> {
    let [alpha, _, gamma, _] = g.entries();
    if gamma.is_zero() {
        return Err(CuspSetError::FixesInfinity);
    }
    let k = alpha.gcd(gamma);
    let gamma_red = gamma / &k;
    Ok(KillerInterval {
        center: ExtendedRational::new(alpha / &k, gamma_red.clone()),
        radius: BigRational::new(BigInt::one(), (&k * gamma_red).abs()),
        contraction: k,
        witness: g.clone(),
        word: None,
    })
}

fn killer_interval_with_word(w: &Witness) -> Result<KillerInterval, CuspSetError> {
    let mut iv = killer_interval(&w.element)?;
    iv.word = Some(w.word.clone());
    Ok(iv)
}

/// Killer interval of the conjugate `T^n g T^{−n}`: same radius and
/// contraction, center translated by `n`. Computed by explicit conjugation.
pub fn shift_killer(g: &GroupElement, n: impl Into<BigInt>) -> Result<KillerInterval, CuspSetError> {
    let n = n.into();
    let t = GroupElement::translation(n.clone());
    let conj = t.compose(g).compose(&GroupElement::translation(-n).clone());
    killer_interval(&conj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStatus {
    /// The open intervals cover the whole closed fundamental interval.
    Complete,
    /// Only isolated points remain uncovered.
    PointGaps,
    /// A positive-length gap remains.
    IntervalGap,
}

/// A family of killer intervals over one fundamental interval.
#[derive(Debug, Clone)]
pub struct Cover {
    pub period_start: BigRational,
    pub length: BigRational,
    /// Deduplicated, sorted by center.
    pub intervals: Vec<KillerInterval>,
    /// Isolated uncovered points, increasing.
    pub uncovered: Vec<ExtendedRational>,
    /// Positive-length uncovered gaps `[a, b]`, increasing.
    pub gaps: Vec<(BigRational, BigRational)>,
    pub status: CoverStatus,
    pub strip: CuspStrip,
}

impl Cover {
    fn interval_with_center(&self, x: &ExtendedRational) -> Option<&KillerInterval> {
        self.intervals
            .binary_search_by(|iv| iv.center.cmp(x))
            .ok()
            .map(|i| &self.intervals[i])
    }

    fn interval_containing(&self, x: &BigRational) -> Option<&KillerInterval> {
        // first interval (by center order) whose interior contains x
        self.intervals.iter().find(|iv| iv.contains(x))
    }
}

/// Collect killer intervals from the cusp strip: one per vertical-side foot
/// (the witnesses have contraction one for integral jigsaws, giving
/// `(m−1, m+1)`), plus one per width-`n` strip triangle about the next-level
/// cusp `m + n/2`. If a positive-length gap remains, develop further below
/// the strip for up to `depth` extra levels, harvesting witnesses for every
/// new vertex that lands in a gap.
pub fn build_cover(g: &JigsawGroup, depth: usize) -> Cover {
    let strip = cusp_strip(g);
    let integral = g.jigsaw().is_integral();
    let mut intervals: BTreeMap<(ExtendedRational, BigRational), KillerInterval> = BTreeMap::new();
    let mut add = |iv: KillerInterval| {
        intervals.entry((iv.center.clone(), iv.radius.clone())).or_insert(iv);
    };

    for v in &strip.verticals {
        let iv = killer_interval_with_word(&v.witness).expect("vertical witnesses move ∞");
        if integral {
            assert!(iv.contraction.is_one(), "integral feet have contraction one");
            assert_eq!(iv.center, ExtendedRational::from_rational(&v.foot));
            assert!(iv.radius.is_one());
        }
        add(iv);
    }
    // next-level cusps below each wide strip triangle
    for st in strip.wide_tiles() {
        let below = st.tile.cross(g, st.bottom_side());
        let feet = [
            ExtendedRational::from_rational(&st.left_foot),
            ExtendedRational::from_rational(&st.right_foot),
        ];
        for c in 0..3 {
            let v = below.vertex(c);
            if feet.contains(&v) {
                continue;
            }
            if integral {
                let mid = (&st.left_foot + &st.right_foot) / BigRational::from(BigInt::from(2));
                assert_eq!(v, ExtendedRational::from_rational(&mid), "new vertex is m + n/2");
            }
            let witness = strip.witness_for_vertex(&below, c);
            let iv = killer_interval_with_word(&witness).expect("mid-cusp witnesses move ∞");
            if integral {
                assert!(iv.contraction == BigInt::one() || iv.contraction == BigInt::from(2));
            }
            add(iv);
        }
    }

    let start = strip.window_start.clone();
    let end = &start + &strip.length;
    let mut merged: Vec<KillerInterval> = intervals.into_values().collect();
    let (mut uncovered, mut gaps) = residual(&merged, &start, &end);

    // deepen the development while true gaps remain
    let mut frontier: Vec<crate::develop::DevelopedTile> =
        strip.tiles.iter().map(|t| t.tile.clone()).collect();
    for _ in 0..depth {
        if gaps.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for t in &frontier {
            for &s in &crate::tiles::SideIndex::ALL {
                let n = t.cross(g, s);
                if n.infinity_corner().is_some() || frontier.contains(&n) {
                    continue;
                }
                next.push(n);
            }
        }
        for t in &next {
            for c in 0..3 {
                let v = t.vertex(c);
                let Some(vr) = v.to_rational() else { continue };
                let in_gap = gaps.iter().any(|(a, b)| &vr >= a && &vr <= b);
                if !in_gap {
                    continue;
                }
                let witness = strip.witness_for_vertex(t, c);
                if let Ok(iv) = killer_interval_with_word(&witness) {
                    merged.push(iv);
                }
            }
        }
        merged.sort_by(|a, b| (a.center.clone(), a.radius.clone()).cmp(&(b.center.clone(), b.radius.clone())));
        merged.dedup_by(|a, b| a.center == b.center && a.radius == b.radius);
        let (u, gp) = residual(&merged, &start, &end);
        uncovered = u;
        gaps = gp;
        frontier = next;
    }

    let status = if !gaps.is_empty() {
        CoverStatus::IntervalGap
    } else if !uncovered.is_empty() {
        CoverStatus::PointGaps
    } else {
        CoverStatus::Complete
    };
    merged.sort_by(|a, b| a.center.cmp(&b.center).then_with(|| a.radius.cmp(&b.radius)));
    Cover {
        period_start: start,
        length: strip.length.clone(),
        intervals: merged,
        uncovered,
        gaps,
        status,
        strip,
    }
}

/// Exact residual of `[start, end]` minus the union of open intervals:
/// isolated points and positive-length closed gaps. Breakpoint sweep: on
/// each open segment between consecutive breakpoints coverage is constant,
/// so testing midpoints and breakpoints decides everything.
fn residual(
    intervals: &[KillerInterval],
    start: &BigRational,
    end: &BigRational,
) -> (Vec<ExtendedRational>, Vec<(BigRational, BigRational)>) {
    let mut points: Vec<BigRational> = vec![start.clone(), end.clone()];
    for iv in intervals {
        for p in [iv.low(), iv.high(), iv.center.to_rational().expect("finite center")] {
            if &p >= start && &p <= end {
                points.push(p);
            }
        }
    }
    points.sort();
    points.dedup();
    let covered = |x: &BigRational| intervals.iter().any(|iv| iv.contains(x));
    let two = BigRational::from(BigInt::from(2));

    // pieces[i]: i even → breakpoint point[i/2]; i odd → open segment
    let mut uncovered_runs: Vec<(BigRational, BigRational)> = Vec::new();
    let mut push = |a: BigRational, b: BigRational| match uncovered_runs.last_mut() {
        Some(last) if last.1 == a => last.1 = b,
        _ => uncovered_runs.push((a, b)),
    };
    for i in 0..points.len() {
        if !covered(&points[i]) {
            push(points[i].clone(), points[i].clone());
        }
        if i + 1 < points.len() {
            let mid = (&points[i] + &points[i + 1]) / &two;
            if !covered(&mid) {
                push(points[i].clone(), points[i + 1].clone());
            }
        }
    }
    let mut isolated = Vec::new();
    let mut gaps = Vec::new();
    for (a, b) in uncovered_runs {
        if a == b {
            isolated.push(ExtendedRational::from_rational(&a));
        } else {
            gaps.push((a, b));
        }
    }
    (isolated, gaps)
}

/// Verdict for one boundary point.
#[derive(Debug, Clone)]
pub enum PointVerdict {
    /// The point is a cusp; applying the word to it gives `∞` exactly.
    Cusp { word: Word },
    /// The point is fixed by a hyperbolic group element.
    Special { witness: GroupElement, word: Word },
    /// Budget exhausted or outside the decided region.
    Unknown { steps: usize },
}

fn default_budget(x: &ExtendedRational) -> usize {
    10 * x.denom().bits().max(8) as usize
}

/// Classify one uncovered point by tracing the ray toward it from the strip
/// triangle it sits under.
fn classify_uncovered(
    g: &JigsawGroup,
    strip: &CuspStrip,
    x: &ExtendedRational,
    ray_budget: usize,
) -> PointVerdict {
    let Some(xr) = x.to_rational() else {
        return PointVerdict::Cusp { word: Word::empty() };
    };
    let Some(host) = strip.tiles.iter().find(|t| t.left_foot < xr && xr < t.right_foot) else {
        return PointVerdict::Unknown { steps: 0 };
    };
    let ray = trace_ray(g, &host.tile, x, ray_budget);
    match ray.outcome {
        RayOutcome::ReachedVertex { tile, corner } => {
            let w = strip.witness_for_vertex(&tile, corner);
            debug_assert_eq!(w.element.apply(&ExtendedRational::infinity()), *x);
            PointVerdict::Cusp { word: w.word.inverse() }
        }
        RayOutcome::StateRepeat { witness, .. } => {
            let fixed = witness
                .element
                .rational_fixed_points()
                .expect("repeat witness is nontrivial");
            assert!(fixed.contains(x), "repeat witness fixes the target");
            assert!(
                witness.element.trace_squared() > BigRational::from(BigInt::from(4)),
                "repeat witness is hyperbolic"
            );
            PointVerdict::Special { witness: witness.element, word: witness.word }
        }
        RayOutcome::Budget => PointVerdict::Unknown { steps: ray_budget },
    }
}

/// One step of a reduction trace.
#[derive(Debug, Clone)]
pub struct ReduceStep {
    pub before: ExtendedRational,
    pub after: ExtendedRational,
    pub action: StepAction,
}

#[derive(Debug, Clone)]
pub enum StepAction {
    /// Applied `T^{L·periods}`.
    Translate { periods: BigInt },
    /// Applied the inverse of the witness of the interval about `center`.
    Killer { center: ExtendedRational, witness: GroupElement },
    /// Ray classification of an isolated uncovered point.
    Uncovered,
}

/// Reduce a rational point against a cover: translate into the period, jump
/// to `∞` at interval centers, contract denominators strictly inside
/// intervals, and hand isolated uncovered points to ray classification.
/// The returned word maps `x` to `∞` for `Cusp`, and the returned witness
/// fixes `x` for `Special`.
pub fn reduce_point(
    g: &JigsawGroup,
    cover: &Cover,
    x: &ExtendedRational,
    budget: usize,
) -> PointVerdict {
    reduce_point_traced(g, cover, x, budget).0
}

/// [`reduce_point`] plus the full step-by-step trace.
pub fn reduce_point_traced(
    g: &JigsawGroup,
    cover: &Cover,
    x: &ExtendedRational,
    budget: usize,
) -> (PointVerdict, Vec<ReduceStep>) {
    let budget = if budget == 0 { default_budget(x) } else { budget };
    let mut current = x.clone();
    // the map applied so far, as element and word
    let mut acc = GroupElement::identity();
    let mut acc_word = Word::empty();
    let mut trace: Vec<ReduceStep> = Vec::new();
    let t_back_word = g.translation_word().inverse();
    let t_fwd_word = g.translation_word();

    for step in 0..budget {
        if current.is_infinity() {
            debug_assert_eq!(acc.apply(x), ExtendedRational::infinity());
            return (PointVerdict::Cusp { word: acc_word }, trace);
        }
        let cur = current.to_rational().expect("finite here");
        // translate into [start, start + L)
        let offset = (&cur - &cover.period_start) / &cover.length;
        let shift = offset.floor().to_integer();
        if !shift.is_zero() {
            let periods = -&shift;
            let e = GroupElement::translation_by(&(&cover.length * BigRational::from(periods.clone())));
            let letter = if shift.is_negative() { &t_fwd_word } else { &t_back_word };
            let mut w = Word::empty();
            let mut n = BigInt::zero();
            while n < shift.abs() {
                w = w.concat(letter);
                n += 1;
            }
            let before = current.clone();
            current = e.apply(&current);
            acc = e.compose(&acc);
            acc_word = w.concat(&acc_word);
            trace.push(ReduceStep {
                before,
                after: current.clone(),
                action: StepAction::Translate { periods },
            });
            continue;
        }
        // an interval center (exact hit jumps to ∞) or interior point
        // (strictly decreasing denominator)
        let hit = cover
            .interval_with_center(&current)
            .or_else(|| cover.interval_containing(&cur));
        if let Some(iv) = hit {
            let exact = iv.center == current;
            let before = current.clone();
            let w = iv.word.as_ref().expect("cover intervals carry words").inverse();
            current = iv.witness.inverse().apply(&current);
            acc = iv.witness.inverse().compose(&acc);
            acc_word = w.concat(&acc_word);
            if exact {
                assert!(current.is_infinity(), "witness inverse sends its center to ∞");
            } else {
                assert!(
                    current.denom() < before.denom(),
                    "killer step must strictly decrease the denominator"
                );
            }
            trace.push(ReduceStep {
                before,
                after: current.clone(),
                action: StepAction::Killer {
                    center: iv.center.clone(),
                    witness: iv.witness.clone(),
                },
            });
            continue;
        }
        // isolated uncovered point
        if cover.uncovered.contains(&current) {
            let verdict = match classify_uncovered(g, &cover.strip, &current, 4096) {
                PointVerdict::Cusp { word } => {
                    debug_assert_eq!(
                        g.evaluate(&word.concat(&acc_word)).apply(x),
                        ExtendedRational::infinity()
                    );
                    PointVerdict::Cusp { word: word.concat(&acc_word) }
                }
                PointVerdict::Special { witness, word } => {
                    // conjugate back to a witness fixing the original x
                    let conj = acc.inverse().compose(&witness).compose(&acc);
                    let conj_word = acc_word.inverse().concat(&word).concat(&acc_word);
                    debug_assert!(conj.rational_fixed_points().unwrap().contains(x));
                    PointVerdict::Special { witness: conj, word: conj_word }
                }
                u => u,
            };
            trace.push(ReduceStep {
                before: current.clone(),
                after: current.clone(),
                action: StepAction::Uncovered,
            });
            return (verdict, trace);
        }
        // inside a true gap: undecided
        return (PointVerdict::Unknown { steps: step }, trace);
    }
    (PointVerdict::Unknown { steps: budget }, trace)
}

// ---------------------------------------------------------------------------
// Group-level classification
// ---------------------------------------------------------------------------

/// Tile families the classifier understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// All tiles `Δ⁽¹⁾` (the modular-group commensurability class).
    Modular,
    /// Tiles among `{Δ⁽¹⁾, Δ⁽²⁾}`.
    S12,
    /// Tiles among `{Δ⁽¹⁾, Δ⁽³⁾}`.
    S13,
    /// Single-tile Weierstrass group `Γ(1, 1/n, n)`, `n ≥ 4`.
    IntegralWeierstrass(BigInt),
    /// Anything else: classification is not claimed.
    Other,
}

pub fn detect_family(j: &Jigsaw) -> Family {
    let ns: Option<Vec<BigInt>> = j.tiles().iter().map(TileType::integral).collect();
    let Some(ns) = ns else { return Family::Other };
    let distinct: std::collections::BTreeSet<&BigInt> = ns.iter().collect();
    let one = BigInt::one();
    if distinct.iter().all(|&n| n == &one) {
        return Family::Modular;
    }
    if distinct.iter().all(|&n| n == &one || n == &BigInt::from(2)) {
        return Family::S12;
    }
    if distinct.iter().all(|&n| n == &one || n == &BigInt::from(3)) {
        return Family::S13;
    }
    if j.size() == 1 {
        return Family::IntegralWeierstrass(ns[0].clone());
    }
    Family::Other
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Arithmetic,
    Pseudomodular,
    NonArithmeticWithSpecials,
    Inconclusive,
}

/// Full classification result with checkable witnesses.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub family: Family,
    pub length: BigRational,
    pub signature: Vec<(TileType, usize)>,
    pub boundary_labels: Vec<BigRational>,
    pub arithmetic: Option<ArithOutcome>,
    pub cover_status: Option<CoverStatus>,
    pub intervals: Vec<(ExtendedRational, BigRational)>,
    pub specials: Vec<Special>,
    pub cusp_points: Vec<ExtendedRational>,
    pub unknown_points: Vec<ExtendedRational>,
    pub tangency: Option<TangencyPattern>,
}

pub fn classify_group(g: &JigsawGroup) -> ClassificationReport {
    classify_group_with(g, 3, 0)
}

/// Classify with explicit cover depth and reduction budget (0 = default).
pub fn classify_group_with(g: &JigsawGroup, depth: usize, budget: usize) -> ClassificationReport {
    let family = detect_family(g.jigsaw());
    let signature = g.jigsaw().signature().to_vec();
    let boundary_labels: Vec<BigRational> =
        g.boundary().iter().map(|b| b.label.clone()).collect();

    if !g.jigsaw().is_integral() || family == Family::Other {
        return ClassificationReport {
            verdict: Verdict::Inconclusive,
            family,
            length: g.length().clone(),
            signature,
            boundary_labels,
            arithmetic: None,
            cover_status: None,
            intervals: Vec::new(),
            specials: Vec::new(),
            cusp_points: Vec::new(),
            unknown_points: Vec::new(),
            tangency: None,
        };
    }

    let cover = build_cover(g, depth);
    let arith_outcome = arith::arithmeticity_check(g, &cover.strip);
    let tangency = Some(arith::tangency_pattern(g, &cover.strip));

    let mut specials = Vec::new();
    let mut cusp_points = Vec::new();
    let mut unknown_points = Vec::new();
    for u in &cover.uncovered {
        match classify_uncovered(g, &cover.strip, u, 4096) {
            PointVerdict::Cusp { .. } => cusp_points.push(u.clone()),
            PointVerdict::Special { witness, word } => {
                specials.push(Special { point: u.clone(), witness: Witness { element: witness, word } });
            }
            PointVerdict::Unknown { .. } => unknown_points.push(u.clone()),
        }
    }
    let _ = budget;

    let verdict = if matches!(arith_outcome, ArithOutcome::Arithmetic { .. }) {
        Verdict::Arithmetic
    } else if !specials.is_empty() {
        Verdict::NonArithmeticWithSpecials
    } else if cover.status == CoverStatus::IntervalGap || !unknown_points.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Pseudomodular
    };

    ClassificationReport {
        verdict,
        family,
        length: g.length().clone(),
        signature,
        boundary_labels,
        arithmetic: Some(arith_outcome),
        cover_status: Some(cover.status),
        intervals: cover
            .intervals
            .iter()
            .map(|iv| (iv.center.clone(), iv.radius.clone()))
            .collect(),
        specials,
        cusp_points,
        unknown_points,
        tangency,
    }
}
