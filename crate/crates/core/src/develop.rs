//! The developing map: cusp strips, geodesic ray tracing, and the
//! special-producing cycle.
//!
//! Every lift of a tile in the triangulation of the plane is `w·p` where
//! `w` is a word in the boundary involutions and `p` the tile's placement in
//! the base copy of the jigsaw. Crossing a side multiplies the placement on
//! the right by a fixed matrix (interior gluing) or by the tile's standard
//! involution (exterior side, which also appends the generator index to the
//! word). The cusp strip enumerates the lifts incident to `∞` over one
//! fundamental interval; since the surface has one cusp, each (tile, corner)
//! pair occurs exactly once per period, which yields an exact witness
//! `g ∈ Γ_J` with `g(∞) = v` for every vertex `v` of every developed tile.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::exact::{in_open_arc, ExtendedRational, GroupElement, Word};
use crate::jigsaw::{std_vertex, Jigsaw, JigsawGroup};
use crate::tiles::{standard_involutions, SideIndex};

/// A placed copy of a tile: `placement` maps the standard triangle
/// `(∞, −1, 0)` onto it, and `placement = w · base` where `w` is the word's
/// value and `base` the tile's placement in the base jigsaw copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DevelopedTile {
    pub tile: usize,
    pub placement: GroupElement,
    pub word: Word,
}

impl DevelopedTile {
    /// Vertex at canonical corner `c ∈ {0,1,2}` (images of `∞, −1, 0`).
    pub fn vertex(&self, c: usize) -> ExtendedRational {
        self.placement.apply(&std_vertex(c))
    }

    pub fn vertices(&self) -> [ExtendedRational; 3] {
        [self.vertex(0), self.vertex(1), self.vertex(2)]
    }

    /// Corner index at `∞`, when this lift touches the cusp.
    pub fn infinity_corner(&self) -> Option<usize> {
        (0..3).find(|&c| self.vertex(c).is_infinity())
    }

    /// Endpoints of side `s`, in the tile's own counterclockwise order.
    pub fn side_endpoints(&self, s: SideIndex) -> (ExtendedRational, ExtendedRational) {
        (self.vertex(s.index0()), self.vertex((s.index0() + 1) % 3))
    }

    /// The developed tile across side `s`: same copy for interior gluings,
    /// the neighboring copy (one more generator letter) for boundary sides.
    pub fn cross(&self, g: &JigsawGroup, s: SideIndex) -> DevelopedTile {
        let cr = g.crossing(self.tile, s);
        let mut word = self.word.clone();
        if let Some(i) = cr.generator {
            word.push(i);
        }
        DevelopedTile { tile: cr.tile, placement: self.placement.compose(&cr.delta), word }
    }

    /// Translate by `periods` fundamental intervals.
    pub fn translated(&self, g: &JigsawGroup, periods: i64) -> DevelopedTile {
        let mut word = Word::empty();
        let step = if periods >= 0 { g.translation_word() } else { g.translation_word().inverse() };
        for _ in 0..periods.unsigned_abs() {
            word = word.concat(&step);
        }
        DevelopedTile {
            tile: self.tile,
            placement: g.evaluate(&word).compose(&self.placement),
            word: word.concat(&self.word),
        }
    }
}

/// Side `s` of developed tile `t`, crossed by [`neighbor`].
pub fn neighbor(g: &JigsawGroup, t: &DevelopedTile, s: SideIndex) -> DevelopedTile {
    t.cross(g, s)
}

/// A group element together with its word in the boundary generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub element: GroupElement,
    pub word: Word,
}

/// A strip tile `Δ_[∞, a, b]`.
#[derive(Debug, Clone)]
pub struct StripTile {
    pub tile: DevelopedTile,
    /// Canonical corner at `∞`.
    pub corner: usize,
    pub left_foot: BigRational,
    pub right_foot: BigRational,
}

impl StripTile {
    fn new(tile: DevelopedTile) -> Self {
        let corner = tile.infinity_corner().expect("strip tiles touch ∞");
        let left = tile
            .vertex((corner + 1) % 3)
            .to_rational()
            .expect("strip feet are finite");
        let right = tile
            .vertex((corner + 2) % 3)
            .to_rational()
            .expect("strip feet are finite");
        debug_assert!(left < right);
        StripTile { tile, corner, left_foot: left, right_foot: right }
    }

    pub fn width(&self) -> BigRational {
        &self.right_foot - &self.left_foot
    }

    /// Side `[∞, left_foot]`.
    pub fn left_side(&self) -> SideIndex {
        SideIndex::from_index0(self.corner)
    }

    /// Side `[left_foot, right_foot]`.
    pub fn bottom_side(&self) -> SideIndex {
        SideIndex::from_index0((self.corner + 1) % 3)
    }

    /// Side `[right_foot, ∞]`.
    pub fn right_side(&self) -> SideIndex {
        SideIndex::from_index0((self.corner + 2) % 3)
    }
}

/// A vertical side `[∞, foot]` of the strip.
#[derive(Debug, Clone)]
pub struct VerticalSide {
    pub foot: BigRational,
    pub label: BigRational,
    /// Lift of an exterior side of the jigsaw (as opposed to an interior
    /// side of the triangulation).
    pub exterior: bool,
    /// π-rotation about the marked point `foot + √n·i`; an element of the
    /// group exactly when the side is exterior.
    pub rotation: GroupElement,
    /// Word of `rotation` when exterior.
    pub rotation_word: Option<Word>,
    /// Group element mapping `∞` to `foot`.
    pub witness: Witness,
}

/// The triangles of the cusp strip over one fundamental interval, with
/// vertical-side data and the per-corner witness factory.
#[derive(Debug, Clone)]
pub struct CuspStrip {
    pub window_start: BigRational,
    pub length: BigRational,
    /// Tiles exactly covering `[window_start, window_start + length]`,
    /// left to right.
    pub tiles: Vec<StripTile>,
    /// Vertical sides with feet in the closed window, in decreasing order
    /// of foot (the strip is indexed in the negative direction).
    pub verticals: Vec<VerticalSide>,
    factory: HashMap<(usize, usize), DevelopedTile>,
}

impl CuspStrip {
    /// Witness in `Γ_J` sending `∞` to the vertex at corner `c` of `t`:
    /// pair `t` against the strip lift of the same tile whose corner `c`
    /// sits at `∞`.
    pub fn witness_for_vertex(&self, t: &DevelopedTile, c: usize) -> Witness {
        let lift = &self.factory[&(t.tile, c)];
        Witness {
            element: t.placement.compose(&lift.placement.inverse()),
            word: t.word.concat(&lift.word.inverse()),
        }
    }

    /// Strip tiles of width `> 1` (the `Δ⁽ⁿ⁾` lifts with `∞` between the
    /// type-n sides).
    pub fn wide_tiles(&self) -> impl Iterator<Item = &StripTile> {
        self.tiles.iter().filter(|t| !t.width().is_one())
    }
}

/// Develop the cusp strip of `g` over the fundamental window
/// `[m_1, m_1 + L]`, where `m_1 = ι_0(v_2)` is the first vertical-side foot
/// left of `v_1`.
pub fn cusp_strip(g: &JigsawGroup) -> CuspStrip {
    let length = g.length().clone();
    let window_start = g.generators()[0]
        .apply(&g.vertices()[2])
        .to_rational()
        .expect("ι_0(v_2) is finite");
    let window_end = &window_start + &length;

    // Seed with the base-copy tiles incident to ∞, ordered left to right.
    let mut strip: Vec<StripTile> = g
        .base_placements()
        .iter()
        .filter(|t| t.infinity_corner().is_some())
        .map(|t| StripTile::new(t.clone()))
        .collect();
    strip.sort_by(|a, b| a.left_foot.cmp(&b.left_foot));
    assert!(!strip.is_empty(), "the base copy touches its cusp");

    // March left and right until the window is covered, plus one tile past
    // the right edge so the edge vertical has a tile on its right.
    while strip.first().unwrap().left_foot > window_start {
        let first = strip.first().unwrap();
        let t = first.tile.cross(g, first.left_side());
        strip.insert(0, StripTile::new(t));
    }
    while strip.last().unwrap().left_foot < window_end {
        let last = strip.last().unwrap();
        let t = last.tile.cross(g, last.right_side());
        strip.push(StripTile::new(t));
    }
    for pair in strip.windows(2) {
        assert_eq!(pair[0].right_foot, pair[1].left_foot, "strip tiles are contiguous");
    }

    // One fundamental interval of tiles; each (tile, corner) class occurs
    // exactly once in it because the surface has a single cusp.
    let mut factory = HashMap::new();
    let mut window_tiles = Vec::new();
    for st in &strip {
        if st.left_foot >= window_start && st.right_foot <= window_end {
            factory.insert((st.tile.tile, st.corner), st.tile.clone());
            window_tiles.push(st.clone());
        }
    }
    assert_eq!(
        factory.len(),
        3 * g.jigsaw().size(),
        "one strip lift per tile corner per period"
    );
    assert_eq!(window_tiles.len(), 3 * g.jigsaw().size());

    let mut verticals = Vec::new();
    for st in &strip {
        if st.left_foot < window_start || st.left_foot > window_end {
            continue;
        }
        let side = st.left_side();
        let label = g.jigsaw().tile(st.tile.tile).label(side).clone();
        let exterior = g.jigsaw().is_boundary(st.tile.tile, side);
        let inv = &standard_involutions(g.jigsaw().tile(st.tile.tile).params())[side.index0()];
        let rotation = st.tile.placement.compose(inv).compose(&st.tile.placement.inverse());
        let rotation_word = exterior.then(|| {
            let i = g
                .crossing(st.tile.tile, side)
                .generator
                .expect("exterior sides carry a generator index");
            let mut w = st.tile.word.clone();
            w.push(i);
            w.concat(&st.tile.word.inverse())
        });
        let witness = if let Some(w) = &rotation_word {
            Witness { element: rotation.clone(), word: w.clone() }
        } else {
            // interior vertical side: pair lifts through the factory
            let mut wit = None;
            if factory.contains_key(&(st.tile.tile, (st.corner + 1) % 3)) {
                let t = strip_witness(&factory, &st.tile, (st.corner + 1) % 3);
                wit = Some(t);
            }
            wit.expect("factory covers all corners")
        };
        debug_assert_eq!(witness.element.apply(&ExtendedRational::infinity()), ExtendedRational::from_rational(&st.left_foot));
        verticals.push(VerticalSide {
            foot: st.left_foot.clone(),
            label,
            exterior,
            rotation,
            rotation_word,
            witness,
        });
    }
    verticals.sort_by(|a, b| b.foot.cmp(&a.foot));

    CuspStrip { window_start, length, tiles: window_tiles, verticals, factory }
}

fn strip_witness(
    factory: &HashMap<(usize, usize), DevelopedTile>,
    t: &DevelopedTile,
    c: usize,
) -> Witness {
    let lift = &factory[&(t.tile, c)];
    Witness {
        element: t.placement.compose(&lift.placement.inverse()),
        word: t.word.concat(&lift.word.inverse()),
    }
}

// ---------------------------------------------------------------------------
// Ray tracing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum RayOutcome {
    /// The target is a vertex of this developed tile (hence a cusp).
    ReachedVertex { tile: DevelopedTile, corner: usize },
    /// The pulled-back state `(tile, entry side, g⁻¹·target)` repeated: the
    /// ray's cutting sequence is periodic and `witness` (first placement
    /// times inverse of second) is a group element fixing the target.
    StateRepeat { witness: Witness, period: usize },
    Budget,
}

#[derive(Debug, Clone)]
pub struct RayTrace {
    /// Tiles of the jigsaw visited, starting with the start tile.
    pub v_sequence: Vec<usize>,
    /// Labels of the crossed sides.
    pub w_sequence: Vec<BigRational>,
    pub outcome: RayOutcome,
}

/// Trace the geodesic ray from the interior of `start` toward `target`,
/// crossing one triangle per step. Exit sides are decided by exact interval
/// membership of the target among the current triangle's vertices; no
/// geodesic intersection is ever computed.
pub fn trace_ray(
    g: &JigsawGroup,
    start: &DevelopedTile,
    target: &ExtendedRational,
    max_steps: usize,
) -> RayTrace {
    let mut v_sequence = vec![start.tile];
    let mut w_sequence = Vec::new();
    let mut current = start.clone();
    let mut seen: HashMap<(usize, SideIndex, ExtendedRational), (usize, DevelopedTile)> =
        HashMap::new();
    for step in 0..max_steps {
        if let Some(corner) = (0..3).find(|&c| &current.vertex(c) == target) {
            return RayTrace {
                v_sequence,
                w_sequence,
                outcome: RayOutcome::ReachedVertex { tile: current, corner },
            };
        }
        // the outside arcs of the three sides partition ∂H² minus vertices
        let exit = SideIndex::ALL
            .into_iter()
            .find(|&s| {
                let (a, b) = current.side_endpoints(s);
                in_open_arc(target, &a, &b)
            })
            .expect("target is in exactly one outside arc");
        w_sequence.push(g.jigsaw().tile(current.tile).label(exit).clone());
        let entry = g.crossing(current.tile, exit).entry_side;
        current = current.cross(g, exit);
        v_sequence.push(current.tile);
        let pulled_back = current.placement.inverse().apply(target);
        let key = (current.tile, entry, pulled_back);
        if let Some((first_step, first)) = seen.get(&key) {
            let witness = Witness {
                element: first.placement.compose(&current.placement.inverse()),
                word: first.word.concat(&current.word.inverse()),
            };
            return RayTrace {
                v_sequence,
                w_sequence,
                outcome: RayOutcome::StateRepeat { witness, period: step + 1 - first_step },
            };
        }
        seen.insert(key, (step + 1, current.clone()));
    }
    RayTrace { v_sequence, w_sequence, outcome: RayOutcome::Budget }
}

// ---------------------------------------------------------------------------
// The special-producing cycle
// ---------------------------------------------------------------------------

/// The fixed period of crossed-side labels that produces specials:
/// `3, 1, 1/3, 1`.
pub fn special_period() -> [BigRational; 4] {
    [
        BigRational::from(BigInt::from(3)),
        BigRational::one(),
        BigRational::new(BigInt::one(), BigInt::from(3)),
        BigRational::one(),
    ]
}

/// Combinatorial state of the label walk: inside `tile`, having entered via
/// `entry`, at position `phase` of the period. The orientation flag records
/// the chirality of the traversal; it is preserved by every transition and
/// only partitions the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkState {
    pub tile: usize,
    pub entry: SideIndex,
    pub orientation: bool,
    pub phase: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkDeath {
    /// The walk would enter a `Δ⁽¹⁾` tile.
    EntersDeltaOne,
    /// The current tile has no non-entry side carrying the required label.
    NoRequiredLabel,
}

#[derive(Debug, Clone)]
pub enum WalkOutcome {
    Dies { at: WalkState, steps: usize, reason: WalkDeath },
    Cycles { cycle: Vec<WalkState> },
}

/// All admissible start states: the tile must carry the full period
/// alphabet `{3, 1, 1/3}` (a `Δ⁽³⁾`-type tile) and the entry side's label
/// must equal the phase's period letter.
pub fn walk_start_states(j: &Jigsaw) -> Vec<WalkState> {
    let period = special_period();
    let mut out = Vec::new();
    for tile in 0..j.size() {
        let has_all_letters = period
            .iter()
            .all(|l| SideIndex::ALL.iter().any(|&s| j.tile(tile).label(s) == l));
        if !has_all_letters {
            continue;
        }
        for &entry in &SideIndex::ALL {
            for (phase, letter) in period.iter().enumerate() {
                if j.tile(tile).label(entry) == letter {
                    for orientation in [false, true] {
                        out.push(WalkState { tile, entry, orientation, phase: phase as u8 });
                    }
                }
            }
        }
    }
    out
}

/// Deterministic label walk with period `3, 1, 1/3, 1`. From each state the
/// unique exit is the non-entry side carrying the next period letter;
/// crossing a boundary side folds back into the same tile. The state space
/// is finite, so with `max_steps` at least `8·3·|J| + 1` the walk always
/// terminates in a cycle or a death.
pub fn special_walk(j: &Jigsaw, start: WalkState, max_steps: usize) -> WalkOutcome {
    let period = special_period();
    assert_eq!(
        j.tile(start.tile).label(start.entry),
        &period[start.phase as usize],
        "start state entry label must match its phase letter"
    );
    let mut seen: HashMap<WalkState, usize> = HashMap::new();
    let mut trail = Vec::new();
    let mut state = start;
    for step in 0..max_steps {
        if let Some(&first) = seen.get(&state) {
            return WalkOutcome::Cycles { cycle: trail[first..].to_vec() };
        }
        seen.insert(state, step);
        trail.push(state);
        let next_label = &period[(state.phase as usize + 1) % 4];
        let Some(exit) = SideIndex::ALL
            .into_iter()
            .find(|&s| s != state.entry && j.tile(state.tile).label(s) == next_label)
        else {
            return WalkOutcome::Dies { at: state, steps: step, reason: WalkDeath::NoRequiredLabel };
        };
        let (tile, entry) = match j.glued_to(state.tile, exit) {
            Some((t2, s2)) => (t2, s2),
            None => (state.tile, exit),
        };
        if j.tile(tile).integral() == Some(BigInt::one()) {
            return WalkOutcome::Dies { at: state, steps: step, reason: WalkDeath::EntersDeltaOne };
        }
        state = WalkState {
            tile,
            entry,
            orientation: state.orientation,
            phase: (state.phase + 1) % 4,
        };
    }
    unreachable!("state space is finite; max_steps must exceed it")
}

/// Upper bound on the walk's state space, plus one.
pub fn walk_budget(j: &Jigsaw) -> usize {
    4 * 2 * 3 * j.size() + 1
}

/// A rational point fixed by a hyperbolic group element.
#[derive(Debug, Clone)]
pub struct Special {
    pub point: ExtendedRational,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no width-3 strip triangle lifts the cycle")]
pub struct NoStripLift;

/// Integer specials produced by a cycle: for each width-3 strip triangle
/// `Δ_[∞, m, m+3]` whose tile lies on the cycle, the ray toward `m+1` has a
/// periodic cutting sequence and its repeat witness is a hyperbolic element
/// fixing `{m−3, m+1}`. Every returned point is verified against its
/// witness's fixed points.
pub fn special_endpoints(
    g: &JigsawGroup,
    strip: &CuspStrip,
    cycle: &[WalkState],
    budget: usize,
) -> Result<Vec<Special>, NoStripLift> {
    let three = BigRational::from(BigInt::from(3));
    let mut out: Vec<Special> = Vec::new();
    let mut found_lift = false;
    for st in strip.wide_tiles() {
        if st.width() != three || !cycle.iter().any(|s| s.tile == st.tile.tile) {
            continue;
        }
        let target = ExtendedRational::from_rational(&(&st.left_foot + BigRational::one()));
        let ray = trace_ray(g, &st.tile, &target, budget);
        if let RayOutcome::StateRepeat { witness, .. } = ray.outcome {
            let fixed = witness
                .element
                .rational_fixed_points()
                .expect("repeat witness is not the identity");
            assert!(
                witness.element.trace_squared() > BigRational::from(BigInt::from(4)),
                "repeat witness must be hyperbolic"
            );
            assert!(fixed.contains(&target), "witness must fix the traced target");
            found_lift = true;
            for p in fixed {
                if !out.iter().any(|s| s.point == p) {
                    out.push(Special { point: p, witness: witness.clone() });
                }
            }
        }
    }
    if found_lift {
        Ok(out)
    } else {
        Err(NoStripLift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jigsaw::{assemble, group, weierstrass, Gluing, JigsawSpec};
    use crate::tiles::{SideIndex as S, TileType};
    use num_traits::{Signed, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn xr(n: i64, d: i64) -> ExtendedRational {
        ExtendedRational::new(n, d)
    }

    fn gamma133() -> JigsawGroup {
        weierstrass(BigRational::one(), rat(1, 3), rat(3, 1)).unwrap()
    }

    fn two_delta1_group() -> JigsawGroup {
        group(
            assemble(JigsawSpec {
                tiles: vec![TileType::delta(1), TileType::delta(1)],
                gluings: vec![Gluing { tile_a: 0, side_a: S::S2, tile_b: 1, side_b: S::S2 }],
            })
            .unwrap(),
        )
    }

    #[test]
    fn neighbor_examples() {
        let g = gamma133();
        // the strip tile Δ_[∞,0,3] sits across the label-3 side of the base
        let base = g.base_placement(0).clone();
        let t = base.cross(&g, S::S3);
        assert_eq!(t.vertices(), [xr(0, 1), xr(3, 1), ExtendedRational::infinity()]);
        // across its side [0,3] lies Δ_[3,0,3/2]
        let below = t.cross(&g, S::S1);
        assert_eq!(below.vertices(), [xr(3, 1), xr(0, 1), xr(3, 2)]);
        // crossing back returns the original tile
        assert_eq!(below.cross(&g, S::S1), t);
        // two-Δ⁽¹⁾ jigsaw: across [−1,0] of the standard tile → Δ_[0,−1,−1/2]
        let g2 = two_delta1_group();
        let n = g2.base_placement(0).cross(&g2, S::S2);
        let mut vs = n.vertices().to_vec();
        vs.sort();
        assert_eq!(vs, vec![xr(-1, 1), xr(-1, 2), xr(0, 1)]);
    }

    #[test]
    fn strip_gamma133() {
        let g = gamma133();
        let strip = cusp_strip(&g);
        assert_eq!(strip.window_start, rat(-2, 1));
        assert_eq!(strip.length, rat(5, 1));
        let feet: Vec<BigRational> = strip.verticals.iter().map(|v| v.foot.clone()).collect();
        assert_eq!(feet, vec![rat(3, 1), rat(0, 1), rat(-1, 1), rat(-2, 1)]);
        // the width-3 triangle is Δ_[∞,0,3]
        let wide: Vec<&StripTile> = strip.wide_tiles().collect();
        assert_eq!(wide.len(), 1);
        assert_eq!(wide[0].left_foot, rat(0, 1));
        assert_eq!(wide[0].width(), rat(3, 1));
        // every vertical witness maps ∞ to its foot and every exterior
        // rotation matches the Lemma matrix (1/√n)[[m, −(m²+n)], [1, −m]]
        for v in &strip.verticals {
            assert_eq!(
                v.witness.element.apply(&ExtendedRational::infinity()),
                ExtendedRational::from_rational(&v.foot)
            );
            assert_eq!(g.evaluate(&v.witness.word), v.witness.element);
            assert!(v.exterior, "single-tile jigsaw has only exterior sides");
            let m = v.foot.to_integer();
            let n = if v.label.is_one() {
                BigInt::one()
            } else if v.label.denom().is_one() {
                v.label.numer().clone()
            } else {
                v.label.denom().clone()
            };
            let expected = GroupElement::new(
                m.clone(),
                -(&m * &m + &n),
                BigInt::one(),
                -&m,
                n,
            )
            .unwrap();
            assert_eq!(v.rotation, expected);
        }
    }

    #[test]
    fn strip_two_delta1() {
        let g = two_delta1_group();
        let strip = cusp_strip(&g);
        assert_eq!(strip.length, rat(6, 1));
        assert_eq!(strip.verticals.len(), 7); // 6 per period plus the repeated edge
        assert!(strip.verticals.iter().all(|v| v.label.is_one()));
        assert!(strip.tiles.iter().all(|t| t.width().is_one()));
    }

    #[test]
    fn strip_s12_type2_sides_are_two_apart() {
        // Δ⁽²⁾ glued to a Δ⁽¹⁾: signature (1,1)
        let j = assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(2)],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 }],
        })
        .unwrap();
        let g = group(j);
        let strip = cusp_strip(&g);
        let two: Vec<&VerticalSide> = strip
            .verticals
            .iter()
            .filter(|v| !v.label.is_one() && v.foot >= strip.window_start)
            .filter(|v| v.foot < &strip.window_start + &strip.length)
            .collect();
        assert_eq!(two.len(), 2);
        assert_eq!((&two[0].foot - &two[1].foot).abs(), rat(2, 1));
    }

    #[test]
    fn witness_factory_covers_all_corners() {
        let g = gamma133();
        let strip = cusp_strip(&g);
        for t in &strip.tiles {
            for c in 0..3 {
                let v = t.tile.vertex(c);
                if v.is_infinity() {
                    continue;
                }
                let w = strip.witness_for_vertex(&t.tile, c);
                assert_eq!(w.element.apply(&ExtendedRational::infinity()), v);
                assert_eq!(g.evaluate(&w.word), w.element);
            }
        }
    }

    #[test]
    fn ray_toward_special_repeats_with_witness_b() {
        let g = gamma133();
        let start = g.base_placement(0).cross(&g, S::S3); // Δ_[∞,0,3]
        let ray = trace_ray(&g, &start, &xr(1, 1), 64);
        let RayOutcome::StateRepeat { witness, period } = &ray.outcome else {
            panic!("expected a periodic ray, got {:?}", ray.outcome);
        };
        assert_eq!(*period, 4);
        assert_eq!(witness.element, GroupElement::new(7, -6, -2, 3, 9).unwrap());
        assert_eq!(g.evaluate(&witness.word), witness.element);
        // V-sequence stays on the single Δ⁽³⁾ tile; W-period is 1,3,1,1/3 cyclically
        assert!(ray.v_sequence.iter().all(|&t| t == 0));
        let w0: Vec<BigRational> = ray.w_sequence.iter().take(4).cloned().collect();
        let period_labels = [rat(1, 1), rat(1, 3), rat(1, 1), rat(3, 1)];
        assert_eq!(w0, period_labels);
    }

    #[test]
    fn ray_toward_vertex_terminates() {
        let g = gamma133();
        let start = g.base_placement(0).cross(&g, S::S3);
        // 3/2 is a vertex of the adjacent tile: one step
        let ray = trace_ray(&g, &start, &xr(3, 2), 64);
        assert_eq!(ray.v_sequence.len(), 2);
        assert!(matches!(ray.outcome, RayOutcome::ReachedVertex { .. }));
        // a vertex of the start tile itself: zero steps
        let ray = trace_ray(&g, &start, &xr(3, 1), 64);
        assert!(ray.w_sequence.is_empty());
        assert!(matches!(ray.outcome, RayOutcome::ReachedVertex { .. }));
    }

    #[test]
    fn translated_strip_tile_yields_shifted_specials() {
        let g = gamma133();
        let start = g.base_placement(0).cross(&g, S::S3).translated(&g, 1); // Δ_[∞,5,8]
        assert_eq!(start.vertices(), [xr(5, 1), xr(8, 1), ExtendedRational::infinity()]);
        let ray = trace_ray(&g, &start, &xr(6, 1), 64);
        let RayOutcome::StateRepeat { witness, .. } = &ray.outcome else {
            panic!("expected a periodic ray");
        };
        assert_eq!(
            witness.element.rational_fixed_points().unwrap(),
            vec![xr(2, 1), xr(6, 1)]
        );
        assert_eq!(g.evaluate(&witness.word), witness.element);
    }

    fn jprime() -> Jigsaw {
        // three Δ⁽³⁾ glued along their 1/3- and 3-sides; carries the cycle
        // and keeps a label-1 boundary side free
        let d3 = TileType::delta(3);
        assemble(JigsawSpec {
            tiles: vec![d3.clone(), d3.clone(), d3],
            gluings: vec![
                Gluing { tile_a: 0, side_a: S::S2, tile_b: 1, side_b: S::S2 },
                Gluing { tile_a: 0, side_a: S::S3, tile_b: 2, side_b: S::S3 },
            ],
        })
        .unwrap()
    }

    #[test]
    fn walk_dies_on_ja_everywhere() {
        let j = crate::jigsaw::assemble(crate::jigsaw::parse_spec(
            r#"{"tiles":[1,3,3,3],"gluings":[[0,1,1,1],[0,2,2,1],[0,3,3,1]]}"#,
        )
        .unwrap())
        .unwrap();
        let budget = walk_budget(&j);
        let starts = walk_start_states(&j);
        assert!(!starts.is_empty());
        for s in starts {
            assert!(
                matches!(special_walk(&j, s, budget), WalkOutcome::Dies { .. }),
                "J_A must kill the walk from {s:?}"
            );
        }
    }

    #[test]
    fn walk_cycles_on_weierstrass_133_and_jprime() {
        for j in [gamma133().jigsaw().clone(), jprime()] {
            let budget = walk_budget(&j);
            for s in walk_start_states(&j) {
                assert!(
                    matches!(special_walk(&j, s, budget), WalkOutcome::Cycles { .. }),
                    "expected a cycle from {s:?}"
                );
            }
        }
    }

    #[test]
    fn s12_has_no_admissible_start() {
        let j = assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(2)],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 }],
        })
        .unwrap();
        assert!(walk_start_states(&j)
            .iter()
            .all(|s| !j.tile(s.tile).label(s.entry).is_zero() && j.tile(s.tile).integral() != Some(BigInt::from(3))));
        // no tile carries a label-3 side at all
        assert!(walk_start_states(&j).is_empty());
    }

    #[test]
    fn endpoints_gamma133() {
        let g = gamma133();
        let strip = cusp_strip(&g);
        let j = g.jigsaw().clone();
        let start = walk_start_states(&j).into_iter().next().unwrap();
        let WalkOutcome::Cycles { cycle } = special_walk(&j, start, walk_budget(&j)) else {
            panic!("Γ(1,1/3,3) carries the cycle");
        };
        let specials = special_endpoints(&g, &strip, &cycle, 256).unwrap();
        let mut points: Vec<ExtendedRational> = specials.iter().map(|s| s.point.clone()).collect();
        points.sort();
        assert_eq!(points, vec![xr(-3, 1), xr(1, 1)]);
        for s in &specials {
            assert!(s.witness.element.rational_fixed_points().unwrap().contains(&s.point));
        }
    }

    #[test]
    fn endpoints_absent_without_cycle_tiles() {
        let g = group(crate::jigsaw::parse_spec(
            r#"{"tiles":[1,3,3,3],"gluings":[[0,1,1,1],[0,2,2,1],[0,3,3,1]]}"#,
        )
        .map(|s| assemble(s).unwrap())
        .unwrap());
        let strip = cusp_strip(&g);
        // feed a fake empty cycle: no width-3 tile participates
        assert!(special_endpoints(&g, &strip, &[], 256).is_err());
    }
}
