//! Jigsaw assembly and jigsaw groups.
//!
//! A jigsaw is a finite set of tiles glued along matching sides so that the
//! dual graph is a tree; the result is a triangulated ideal polygon with
//! `N + 2` boundary sides for `N` tiles. Its group is generated by the
//! π-rotations about the marked points of the boundary sides. One tile
//! (a `Δ⁽¹⁾` when present) is developed in standard position `(∞, −1, 0)`,
//! which makes every vertex rational and pins the generator indexing:
//! `ι_i` rotates about the marked point of `s_i = [v_i, v_{i+1}]` where
//! `v_0 = ∞` and `v_1 < v_2 < … < v_{N+1}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::develop::DevelopedTile;
use crate::exact::{ExtendedRational, GroupElement, Word};
use crate::tiles::{standard_involutions, SideIndex, TileError, TileType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JigsawError {
    #[error("jigsaw has no tiles")]
    Empty,
    #[error("gluing references tile {0} which does not exist")]
    BadTileIndex(usize),
    #[error("side {side} of tile {tile} is used by more than one gluing")]
    DuplicateSideUse { tile: usize, side: SideIndex },
    #[error("sides do not match: tile {tile_a} side {side_a} (label {label_a}) vs tile {tile_b} side {side_b} (label {label_b})")]
    MatchFailure {
        tile_a: usize,
        side_a: SideIndex,
        tile_b: usize,
        side_b: SideIndex,
        label_a: BigRational,
        label_b: BigRational,
    },
    #[error("gluings do not form a tree on the tiles")]
    NotATree,
    #[error("invalid tile: {0}")]
    Tile(#[from] TileError),
    #[error("spec parse error: {0}")]
    Parse(String),
}

/// One gluing: side `side_a` of tile `tile_a` onto side `side_b` of tile
/// `tile_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub tile_a: usize,
    pub side_a: SideIndex,
    pub tile_b: usize,
    pub side_b: SideIndex,
}

/// The raw combinatorial description of a jigsaw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JigsawSpec {
    pub tiles: Vec<TileType>,
    pub gluings: Vec<Gluing>,
}

/// Whether a singleton set is admitted on request (Weierstrass groups of a
/// single tile) even without a self-matching side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMode {
    Standard,
    WeierstrassSingleton,
}

/// Jigsaw-set axiom: every tile has a side matching a side of some other
/// tile of the set. A singleton passes when the tile has two equal labels,
/// or unconditionally in [`SetMode::WeierstrassSingleton`].
pub fn validate_set(tiles: &[TileType], mode: SetMode) -> bool {
    match tiles {
        [] => false,
        [t] => {
            mode == SetMode::WeierstrassSingleton
                || SideIndex::ALL
                    .iter()
                    .any(|&s| t.label(s) == t.label(s.next()))
        }
        _ => tiles.iter().enumerate().all(|(i, t)| {
            SideIndex::ALL.iter().any(|&s| {
                tiles.iter().enumerate().any(|(k, u)| {
                    k != i && SideIndex::ALL.iter().any(|&r| t.sides_match(s, u, r))
                })
            })
        }),
    }
}

/// One boundary side of an assembled jigsaw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySide {
    pub tile: usize,
    pub side: SideIndex,
    pub label: BigRational,
}

/// A boundary vertex: the tile corners incident to it, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexInfo {
    /// `(tile, corner)` pairs; corner `c` of a tile sits between its sides
    /// `c.prev()` and `c`.
    pub corners: Vec<(usize, SideIndex)>,
    /// Number of triangles at the vertex.
    pub weight: usize,
    /// Sum of corner J-widths; defined for integral jigsaws only.
    pub jwidth: Option<BigInt>,
}

/// J-width of corner `c` of an integral tile: `n` at the corner between the
/// two type-`n` sides of `Δ⁽ⁿ⁾` (the canonical corner 3), `1` elsewhere.
fn corner_jwidth(tile: &TileType, corner: SideIndex) -> Option<BigInt> {
    tile.integral()
        .map(|n| if corner == SideIndex::S3 { n } else { BigInt::one() })
}

/// An assembled jigsaw: validated spec plus derived boundary structure.
#[derive(Debug, Clone)]
pub struct Jigsaw {
    spec: JigsawSpec,
    glued: BTreeMap<(usize, SideIndex), (usize, SideIndex)>,
    boundary: Vec<BoundarySide>,
    /// `vertices[i]` is the vertex between `boundary[i-1]` and `boundary[i]`.
    vertices: Vec<VertexInfo>,
    signature: Vec<(TileType, usize)>,
    integral: bool,
    jwidth_sum: Option<BigInt>,
}

/// Assemble and validate a jigsaw from its spec.
pub fn assemble(spec: JigsawSpec) -> Result<Jigsaw, JigsawError> {
    let n = spec.tiles.len();
    if n == 0 {
        return Err(JigsawError::Empty);
    }
    let mut glued = BTreeMap::new();
    let mut adj = vec![Vec::new(); n];
    for g in &spec.gluings {
        for t in [g.tile_a, g.tile_b] {
            if t >= n {
                return Err(JigsawError::BadTileIndex(t));
            }
        }
        let a = (g.tile_a, g.side_a);
        let b = (g.tile_b, g.side_b);
        if a == b {
            return Err(JigsawError::DuplicateSideUse { tile: g.tile_a, side: g.side_a });
        }
        for &(tile, side) in [&a, &b] {
            if glued.contains_key(&(tile, side)) {
                return Err(JigsawError::DuplicateSideUse { tile, side });
            }
        }
        if !spec.tiles[g.tile_a].sides_match(g.side_a, &spec.tiles[g.tile_b], g.side_b) {
            return Err(JigsawError::MatchFailure {
                tile_a: g.tile_a,
                side_a: g.side_a,
                tile_b: g.tile_b,
                side_b: g.side_b,
                label_a: spec.tiles[g.tile_a].label(g.side_a).clone(),
                label_b: spec.tiles[g.tile_b].label(g.side_b).clone(),
            });
        }
        glued.insert(a, b);
        glued.insert(b, a);
        adj[g.tile_a].push(g.tile_b);
        adj[g.tile_b].push(g.tile_a);
    }
    // tree check: |E| = |V| - 1 and connected
    if spec.gluings.len() != n - 1 {
        return Err(JigsawError::NotATree);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(t) = queue.pop_front() {
        for &u in &adj[t] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(JigsawError::NotATree);
    }

    // Boundary walk. From boundary side (t, s), the next boundary side in
    // counterclockwise order is found by rotating within the tile and
    // hopping across interior gluings; each hop records one tile corner at
    // the vertex between the two boundary sides.
    let start = (0..n)
        .flat_map(|t| SideIndex::ALL.iter().map(move |&s| (t, s)))
        .find(|k| !glued.contains_key(k))
        .expect("a tree of triangles always has boundary sides");
    let mut boundary = Vec::new();
    let mut vertex_corners = Vec::new();
    let mut cur = start;
    loop {
        boundary.push(BoundarySide {
            tile: cur.0,
            side: cur.1,
            label: spec.tiles[cur.0].label(cur.1).clone(),
        });
        let mut corners = vec![(cur.0, cur.1.next())];
        let mut probe = (cur.0, cur.1.next());
        while let Some(&(t2, s2)) = glued.get(&probe) {
            corners.push((t2, s2.next()));
            probe = (t2, s2.next());
        }
        vertex_corners.push(corners);
        cur = probe;
        if cur == start {
            break;
        }
    }
    debug_assert_eq!(boundary.len(), n + 2);
    // corners collected while leaving boundary[i] belong to the vertex
    // between boundary[i] and boundary[i+1], i.e. to vertices[i+1]
    vertex_corners.rotate_right(1);

    let integral = spec.tiles.iter().all(|t| t.integral().is_some());
    let vertices: Vec<VertexInfo> = vertex_corners
        .into_iter()
        .map(|corners| {
            let jwidth = corners
                .iter()
                .map(|&(t, c)| corner_jwidth(&spec.tiles[t], c))
                .try_fold(BigInt::zero(), |acc, w| w.map(|w| acc + w));
            VertexInfo { weight: corners.len(), jwidth, corners }
        })
        .collect();
    let jwidth_sum = vertices
        .iter()
        .map(|v| v.jwidth.clone())
        .try_fold(BigInt::zero(), |acc, w| w.map(|w| acc + w));

    let mut sig: BTreeMap<TileType, usize> = BTreeMap::new();
    for t in &spec.tiles {
        *sig.entry(t.clone()).or_insert(0) += 1;
    }

    Ok(Jigsaw {
        spec,
        glued,
        boundary,
        vertices,
        signature: sig.into_iter().collect(),
        integral,
        jwidth_sum,
    })
}

impl Jigsaw {
    pub fn spec(&self) -> &JigsawSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.spec.tiles.len()
    }

    pub fn tile(&self, i: usize) -> &TileType {
        &self.spec.tiles[i]
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.spec.tiles
    }

    pub fn boundary(&self) -> &[BoundarySide] {
        &self.boundary
    }

    pub fn vertices(&self) -> &[VertexInfo] {
        &self.vertices
    }

    /// Tile counts per type, ordered by tile type.
    pub fn signature(&self) -> &[(TileType, usize)] {
        &self.signature
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Interior partner of `(tile, side)`, if glued.
    pub fn glued_to(&self, tile: usize, side: SideIndex) -> Option<(usize, SideIndex)> {
        self.glued.get(&(tile, side)).copied()
    }

    pub fn is_boundary(&self, tile: usize, side: SideIndex) -> bool {
        !self.glued.contains_key(&(tile, side))
    }

    /// Fundamental length `L = Σ J-widths`; `None` for non-integral jigsaws
    /// (their translation length comes from [`JigsawGroup::length`]).
    pub fn fundamental_length(&self) -> Option<&BigInt> {
        self.jwidth_sum.as_ref()
    }

    /// Rooted plane-tree encoding starting from a boundary side: side labels
    /// in counterclockwise order, descending through interior gluings.
    fn encode_from(&self, root: usize) -> String {
        fn enc(j: &Jigsaw, tile: usize, entry: SideIndex, out: &mut String) {
            let mut s = entry;
            for _ in 0..2 {
                s = s.next();
                let label = j.spec.tiles[tile].label(s);
                out.push_str(&format!("{}/{}", label.numer(), label.denom()));
                match j.glued.get(&(tile, s)) {
                    Some(&(t2, s2)) => {
                        out.push('[');
                        enc(j, t2, s2, out);
                        out.push(']');
                    }
                    None => out.push('.'),
                }
            }
        }
        let b = &self.boundary[root];
        let mut out = format!("{}/{}|", b.label.numer(), b.label.denom());
        enc(self, b.tile, b.side, &mut out);
        out
    }

    /// Canonical isomorphism key: the least rooted encoding over all
    /// boundary roots. Invariant under tile relabeling and boundary
    /// rotation; mirror images get different keys (the walk is always
    /// counterclockwise).
    pub fn canonical_key(&self) -> String {
        (0..self.boundary.len())
            .map(|r| self.encode_from(r))
            .min()
            .expect("non-empty boundary")
    }
}

/// Möbius transformation sending `(∞, −1, 0)` to `(p, q, r)`, as a canonical
/// group element. The target triple must be positively oriented.
fn mobius_through(
    p: &ExtendedRational,
    q: &ExtendedRational,
    r: &ExtendedRational,
) -> GroupElement {
    // columns λ·(p) and μ·(r) with λ, μ fixed by the middle target
    let lambda = q.denom() * r.numer() - q.numer() * r.denom();
    let mu = q.denom() * p.numer() - q.numer() * p.denom();
    let m11 = p.numer() * &lambda;
    let m21 = p.denom() * &lambda;
    let m12 = r.numer() * &mu;
    let m22 = r.denom() * &mu;
    let det = &m11 * &m22 - &m12 * &m21;
    debug_assert!(det.is_positive(), "targets must be positively oriented");
    GroupElement::new(m11, m12, m21, m22, det).expect("interpolation through distinct points")
}

/// How to cross one side of a developed tile: right-multiply the placement
/// by `delta`; exterior crossings append the boundary generator index.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub tile: usize,
    pub entry_side: SideIndex,
    pub delta: GroupElement,
    pub generator: Option<usize>,
}

/// A jigsaw developed into the upper half-plane, with its group data.
#[derive(Debug, Clone)]
pub struct JigsawGroup {
    jigsaw: Jigsaw,
    base_tile: usize,
    base_placements: Vec<DevelopedTile>,
    /// Boundary sides rotated so that index `i` is `s_i = [v_i, v_{i+1}]`.
    boundary: Vec<BoundarySide>,
    vertex_info: Vec<VertexInfo>,
    /// `v_0 = ∞` followed by the finite vertices in increasing order.
    vertices: Vec<ExtendedRational>,
    generators: Vec<GroupElement>,
    length: BigRational,
    translation: GroupElement,
    cross: HashMap<(usize, SideIndex), Crossing>,
}

/// Develop a jigsaw and compute its group.
pub fn group(jigsaw: Jigsaw) -> JigsawGroup {
    let n = jigsaw.size();
    let base_tile = (0..n)
        .find(|&i| jigsaw.tile(i).integral() == Some(BigInt::one()))
        .unwrap_or(0);

    // Develop every tile from the base across the gluing tree. The neighbor
    // across side `c` shares that side with reversed orientation and its
    // far vertex is the ι_c-image of the current far vertex.
    let mut placements: Vec<Option<GroupElement>> = vec![None; n];
    placements[base_tile] = Some(GroupElement::identity());
    let mut queue = VecDeque::from([base_tile]);
    while let Some(t) = queue.pop_front() {
        let pl = placements[t].clone().expect("queued tiles are placed");
        let inv = standard_involutions(jigsaw.tile(t).params());
        for &s in &SideIndex::ALL {
            let Some((t2, s2)) = jigsaw.glued_to(t, s) else { continue };
            if placements[t2].is_some() {
                continue;
            }
            let a = pl.apply(&std_vertex(s.index0()));
            let b = pl.apply(&std_vertex((s.index0() + 1) % 3));
            let far = pl
                .compose(&inv[s.index0()])
                .apply(&std_vertex((s.index0() + 2) % 3));
            let mut targets = [
                ExtendedRational::infinity(),
                ExtendedRational::infinity(),
                ExtendedRational::infinity(),
            ];
            targets[s2.index0()] = b;
            targets[(s2.index0() + 1) % 3] = a;
            targets[(s2.index0() + 2) % 3] = far;
            placements[t2] = Some(mobius_through(&targets[0], &targets[1], &targets[2]));
            queue.push_back(t2);
        }
    }
    let placements: Vec<GroupElement> = placements
        .into_iter()
        .map(|p| p.expect("tree connectivity places every tile"))
        .collect();

    // Polygon vertices: ∞ from the base tile plus N+1 finite rationals.
    let mut all = BTreeSet::new();
    for pl in &placements {
        for c in 0..3 {
            all.insert(pl.apply(&std_vertex(c)));
        }
    }
    let vertices: Vec<ExtendedRational> = {
        let mut finite: Vec<ExtendedRational> =
            all.iter().filter(|v| !v.is_infinity()).cloned().collect();
        finite.sort();
        assert!(all.contains(&ExtendedRational::infinity()), "base tile has ∞ as a vertex");
        assert_eq!(finite.len(), n + 1, "developed vertices must be distinct");
        let mut v = vec![ExtendedRational::infinity()];
        v.extend(finite);
        v
    };

    // Rotate the boundary walk so index 0 is s_0 = [∞, v_1].
    let endpoints = |b: &BoundarySide| {
        let pl = &placements[b.tile];
        (
            pl.apply(&std_vertex(b.side.index0())),
            pl.apply(&std_vertex((b.side.index0() + 1) % 3)),
        )
    };
    let m = jigsaw.boundary.len();
    let rot = (0..m)
        .find(|&i| {
            let (a, b) = endpoints(&jigsaw.boundary[i]);
            a.is_infinity() && b == vertices[1]
        })
        .expect("some boundary side develops onto [∞, v_1]");
    let mut boundary = jigsaw.boundary.clone();
    boundary.rotate_left(rot);
    let mut vertex_info = jigsaw.vertices.clone();
    vertex_info.rotate_left(rot);
    for (i, b) in boundary.iter().enumerate() {
        let (a, bb) = endpoints(b);
        assert_eq!(a, vertices[i], "boundary side {i} starts at v_{i}");
        assert_eq!(bb, vertices[(i + 1) % m], "boundary side {i} ends at v_{}", (i + 1) % m);
    }

    // Generators: conjugates of the standard involutions by the placements.
    let generators: Vec<GroupElement> = boundary
        .iter()
        .map(|b| {
            let pl = &placements[b.tile];
            let inv = &standard_involutions(jigsaw.tile(b.tile).params())[b.side.index0()];
            pl.compose(inv).compose(&pl.inverse())
        })
        .collect();

    // ι_{N+1}···ι_0 is the peripheral translation T^L.
    let product = generators
        .iter()
        .rev()
        .fold(GroupElement::identity(), |acc, g| acc.compose(g));
    let e = product.entries();
    assert!(e[2].is_zero() && e[0] == e[3], "peripheral product must be a translation");
    let length = BigRational::new(e[1].clone(), e[0].clone());
    assert!(length.is_positive());
    if let Some(l) = jigsaw.fundamental_length() {
        assert_eq!(
            &length,
            &BigRational::from(l.clone()),
            "L = Σ m_i(2 + n_i) for integral jigsaws"
        );
    }

    // Crossing table for the developing map.
    let mut cross = HashMap::new();
    for t in 0..n {
        let inv = standard_involutions(jigsaw.tile(t).params());
        for &s in &SideIndex::ALL {
            let crossing = match jigsaw.glued_to(t, s) {
                Some((t2, s2)) => Crossing {
                    tile: t2,
                    entry_side: s2,
                    delta: placements[t].inverse().compose(&placements[t2]),
                    generator: None,
                },
                None => {
                    let gen = boundary
                        .iter()
                        .position(|b| b.tile == t && b.side == s)
                        .expect("unglued side is on the boundary");
                    Crossing {
                        tile: t,
                        entry_side: s,
                        delta: inv[s.index0()].clone(),
                        generator: Some(gen),
                    }
                }
            };
            cross.insert((t, s), crossing);
        }
    }

    let base_placements = placements
        .into_iter()
        .enumerate()
        .map(|(tile, placement)| DevelopedTile { tile, placement, word: Word::empty() })
        .collect();

    JigsawGroup {
        jigsaw,
        base_tile,
        base_placements,
        boundary,
        vertex_info,
        vertices,
        generators,
        length,
        translation: product,
        cross,
    }
}

pub(crate) fn std_vertex(c: usize) -> ExtendedRational {
    match c {
        0 => ExtendedRational::infinity(),
        1 => ExtendedRational::from_integer(-1),
        2 => ExtendedRational::from_integer(0),
        _ => unreachable!(),
    }
}

impl JigsawGroup {
    pub fn jigsaw(&self) -> &Jigsaw {
        &self.jigsaw
    }

    pub fn base_tile(&self) -> usize {
        self.base_tile
    }

    /// Placement of tile `i` within the base copy of the jigsaw.
    pub fn base_placement(&self, i: usize) -> &DevelopedTile {
        &self.base_placements[i]
    }

    pub fn base_placements(&self) -> &[DevelopedTile] {
        &self.base_placements
    }

    /// Boundary sides in the cyclic order `s_0, …, s_{N+1}`.
    pub fn boundary(&self) -> &[BoundarySide] {
        &self.boundary
    }

    pub fn vertex_info(&self) -> &[VertexInfo] {
        &self.vertex_info
    }

    /// `v_0 = ∞, v_1 < … < v_{N+1}`.
    pub fn vertices(&self) -> &[ExtendedRational] {
        &self.vertices
    }

    /// Generators `ι_0, …, ι_{N+1}`.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Translation length of the peripheral parabolic.
    pub fn length(&self) -> &BigRational {
        &self.length
    }

    pub fn length_int(&self) -> Option<BigInt> {
        self.length.is_integer().then(|| self.length.to_integer())
    }

    /// `T^L = ι_{N+1}···ι_0`.
    pub fn translation(&self) -> &GroupElement {
        &self.translation
    }

    /// Word of `T^L` in the generators.
    pub fn translation_word(&self) -> Word {
        let mut w = Word::empty();
        for i in (0..self.generators.len()).rev() {
            w.push(i);
        }
        w
    }

    pub fn crossing(&self, tile: usize, side: SideIndex) -> &Crossing {
        &self.cross[&(tile, side)]
    }

    /// Evaluate a word in the boundary generators.
    pub fn evaluate(&self, word: &Word) -> GroupElement {
        word.evaluate(&self.generators)
    }
}

/// The Weierstrass group of a single balanced rational tile: the one-tile
/// jigsaw with all three sides free.
pub fn weierstrass(
    k1: BigRational,
    k2: BigRational,
    k3: BigRational,
) -> Result<JigsawGroup, JigsawError> {
    let tile = TileType::new(k1, k2, k3)?;
    let jig = assemble(JigsawSpec { tiles: vec![tile], gluings: vec![] })?;
    Ok(group(jig))
}

/// Enumerate all jigsaws over `set` with at most `max_size` tiles, using
/// every tile type at least once, up to orientation-preserving isomorphism.
/// Deterministic: results sorted by (size, canonical key).
pub fn census(set: &[TileType], max_size: usize) -> Result<Vec<Jigsaw>, JigsawError> {
    let mut types: Vec<TileType> = set.to_vec();
    types.sort();
    types.dedup();
    if types.is_empty() {
        return Err(JigsawError::Empty);
    }

    // level-by-level growth with canonical dedup
    let mut level: BTreeMap<String, Jigsaw> = BTreeMap::new();
    for t in &types {
        let jig = assemble(JigsawSpec { tiles: vec![t.clone()], gluings: vec![] })?;
        level.insert(jig.canonical_key(), jig);
    }
    let mut all: Vec<BTreeMap<String, Jigsaw>> = vec![level];
    for _ in 1..max_size {
        let prev = all.last().unwrap();
        let mut next: BTreeMap<String, Jigsaw> = BTreeMap::new();
        for jig in prev.values() {
            let fresh = jig.size();
            for b in jig.boundary() {
                for u in &types {
                    for &r in &SideIndex::ALL {
                        if u.label(r) != &b.label {
                            continue;
                        }
                        let mut spec = jig.spec().clone();
                        spec.tiles.push(u.clone());
                        spec.gluings.push(Gluing {
                            tile_a: b.tile,
                            side_a: b.side,
                            tile_b: fresh,
                            side_b: r,
                        });
                        let bigger = assemble(spec).expect("extension of a valid jigsaw");
                        next.entry(bigger.canonical_key()).or_insert(bigger);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.push(next);
    }

    let uses_all = |j: &Jigsaw| types.iter().all(|t| j.tiles().iter().any(|u| u == t));
    Ok(all.into_iter().flat_map(|m| m.into_values()).filter(uses_all).collect())
}

// ---------------------------------------------------------------------------
// JigsawSpec file format
// ---------------------------------------------------------------------------

/// Parse the JSON spec format:
///
/// ```json
/// {"tiles": [[k1n,k1d,k2n,k2d,k3n,k3d], …], "gluings": [[tileA, sideA, tileB, sideB], …]}
/// ```
///
/// with 0-based tile indices and 1-based side indices; the integral
/// shorthand `{"tiles": [1, 3, 3, 3], …}` lists `Δ⁽ⁿ⁾` values directly.
pub fn parse_spec(text: &str) -> Result<JigsawSpec, JigsawError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| JigsawError::Parse(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| JigsawError::Parse("expected a JSON object".into()))?;
    let tiles_v = obj
        .get("tiles")
        .and_then(|t| t.as_array())
        .ok_or_else(|| JigsawError::Parse("missing \"tiles\" array".into()))?;
    let int_of = |v: &serde_json::Value, what: &str| -> Result<i64, JigsawError> {
        v.as_i64()
            .ok_or_else(|| JigsawError::Parse(format!("{what} must be an integer")))
    };
    let mut tiles = Vec::new();
    for (i, t) in tiles_v.iter().enumerate() {
        let tile = match t {
            serde_json::Value::Number(_) => {
                let n = int_of(t, "tile shorthand")?;
                if n < 1 {
                    return Err(JigsawError::Parse(format!("tile {i}: Δ⁽ⁿ⁾ needs n ≥ 1")));
                }
                TileType::delta(n as u64)
            }
            serde_json::Value::Array(parts) if parts.len() == 6 => {
                let mut nums = [0i64; 6];
                for (k, p) in parts.iter().enumerate() {
                    nums[k] = int_of(p, "tile parameter")?;
                }
                if nums.iter().skip(1).step_by(2).any(|&d| d == 0) {
                    return Err(JigsawError::Parse(format!("tile {i}: zero denominator")));
                }
                TileType::new(
                    BigRational::new(nums[0].into(), nums[1].into()),
                    BigRational::new(nums[2].into(), nums[3].into()),
                    BigRational::new(nums[4].into(), nums[5].into()),
                )?
            }
            _ => {
                return Err(JigsawError::Parse(format!(
                    "tile {i}: expected an integer or a 6-element array"
                )))
            }
        };
        tiles.push(tile);
    }
    let mut gluings = Vec::new();
    if let Some(gl) = obj.get("gluings") {
        let gl = gl
            .as_array()
            .ok_or_else(|| JigsawError::Parse("\"gluings\" must be an array".into()))?;
        for (i, g) in gl.iter().enumerate() {
            let parts = g.as_array().filter(|p| p.len() == 4).ok_or_else(|| {
                JigsawError::Parse(format!("gluing {i}: expected [tileA, sideA, tileB, sideB]"))
            })?;
            let raw: Vec<i64> = parts
                .iter()
                .map(|p| int_of(p, "gluing entry"))
                .collect::<Result<_, _>>()?;
            let side = |x: i64| {
                u8::try_from(x)
                    .ok()
                    .and_then(SideIndex::new)
                    .ok_or_else(|| {
                        JigsawError::Parse(format!("gluing {i}: side index {x} out of 1..=3"))
                    })
            };
            let tile = |x: i64| {
                usize::try_from(x)
                    .map_err(|_| JigsawError::Parse(format!("gluing {i}: bad tile index {x}")))
            };
            gluings.push(Gluing {
                tile_a: tile(raw[0])?,
                side_a: side(raw[1])?,
                tile_b: tile(raw[2])?,
                side_b: side(raw[3])?,
            });
        }
    }
    Ok(JigsawSpec { tiles, gluings })
}

/// Canonical serialization of a spec (full rational tile form).
pub fn serialize_spec(spec: &JigsawSpec) -> String {
    let num = |x: &BigInt| {
        serde_json::Value::from(i64::try_from(x).expect("tile parameters fit in i64"))
    };
    let tiles: Vec<serde_json::Value> = spec
        .tiles
        .iter()
        .map(|t| {
            let mut parts = Vec::with_capacity(6);
            for k in t.params() {
                parts.push(num(k.numer()));
                parts.push(num(k.denom()));
            }
            serde_json::Value::Array(parts)
        })
        .collect();
    let gluings: Vec<serde_json::Value> = spec
        .gluings
        .iter()
        .map(|g| {
            serde_json::Value::Array(vec![
                serde_json::Value::from(g.tile_a),
                serde_json::Value::from(g.side_a.index0() as u64 + 1),
                serde_json::Value::from(g.tile_b),
                serde_json::Value::from(g.side_b.index0() as u64 + 1),
            ])
        })
        .collect();
    serde_json::json!({ "tiles": tiles, "gluings": gluings }).to_string()
}

impl fmt::Display for Jigsaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jigsaw[")?;
        for (i, (t, m)) in self.signature.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}×{t:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::SideIndex as S;

    pub(crate) fn two_delta1() -> Jigsaw {
        assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(1)],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S2, tile_b: 1, side_b: S::S2 }],
        })
        .unwrap()
    }

    /// One Δ⁽¹⁾ glued to three Δ⁽³⁾ along its three sides.
    pub(crate) fn ja() -> Jigsaw {
        let d3 = TileType::delta(3);
        assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), d3.clone(), d3.clone(), d3],
            gluings: vec![
                Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 },
                Gluing { tile_a: 0, side_a: S::S2, tile_b: 2, side_b: S::S1 },
                Gluing { tile_a: 0, side_a: S::S3, tile_b: 3, side_b: S::S1 },
            ],
        })
        .unwrap()
    }

    #[test]
    fn validate_set_examples() {
        let d1 = TileType::delta(1);
        let d2 = TileType::delta(2);
        let d3 = TileType::delta(3);
        assert!(validate_set(&[d1.clone(), d2], SetMode::Standard));
        assert!(validate_set(&[d1.clone()], SetMode::Standard));
        assert!(!validate_set(&[d3.clone()], SetMode::Standard));
        assert!(validate_set(&[d3], SetMode::WeierstrassSingleton));
        let d5 = TileType::delta(5);
        let d7 = TileType::delta(7);
        assert!(validate_set(&[d5, d7], SetMode::Standard));
    }

    #[test]
    fn assemble_two_delta1() {
        let j = two_delta1();
        assert_eq!(j.boundary().len(), 4);
        assert!(j.boundary().iter().all(|b| b.label.is_one()));
        assert_eq!(j.fundamental_length(), Some(&BigInt::from(6)));
        assert_eq!(j.signature(), &[(TileType::delta(1), 2)]);
    }

    #[test]
    fn assemble_ja() {
        let j = ja();
        assert_eq!(j.boundary().len(), 6);
        assert_eq!(j.vertices().len(), 6);
        for v in j.vertices() {
            assert_eq!(v.jwidth, Some(BigInt::from(3)));
        }
        assert_eq!(j.fundamental_length(), Some(&BigInt::from(18)));
    }

    #[test]
    fn assemble_sig11() {
        // one Δ⁽¹⁾ and one Δ⁽²⁾ glued on label-1 sides
        let j = assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(2)],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 }],
        })
        .unwrap();
        assert_eq!(j.signature().len(), 2);
        assert_eq!(j.fundamental_length(), Some(&BigInt::from(7)));
    }

    #[test]
    fn assemble_rejects_invalid() {
        let d3 = TileType::delta(3);
        // mismatched labels: 3 against 1/3
        let err = assemble(JigsawSpec {
            tiles: vec![d3.clone(), d3.clone()],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S3, tile_b: 1, side_b: S::S2 }],
        })
        .unwrap_err();
        assert!(matches!(err, JigsawError::MatchFailure { .. }));
        // not a tree: two tiles, no gluing
        let err = assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(1)],
            gluings: vec![],
        })
        .unwrap_err();
        assert_eq!(err, JigsawError::NotATree);
        // duplicate side use
        let err = assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(1), TileType::delta(1)],
            gluings: vec![
                Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 },
                Gluing { tile_a: 0, side_a: S::S1, tile_b: 2, side_b: S::S1 },
            ],
        })
        .unwrap_err();
        assert!(matches!(err, JigsawError::DuplicateSideUse { .. }));
    }

    #[test]
    fn weierstrass_generators_and_lengths() {
        let one = BigRational::one;
        let g111 = weierstrass(one(), one(), one()).unwrap();
        assert_eq!(
            g111.generators(),
            &[
                GroupElement::new(1, 2, -1, -1, 1).unwrap(),
                GroupElement::new(1, 1, -2, -1, 1).unwrap(),
                GroupElement::new(0, 1, -1, 0, 1).unwrap(),
            ]
        );
        assert_eq!(g111.length_int(), Some(BigInt::from(3)));

        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let g123 = weierstrass(one(), r(1, 3), r(3, 1)).unwrap();
        assert_eq!(
            g123.generators(),
            &[
                GroupElement::new(1, 2, -1, -1, 1).unwrap(),
                GroupElement::new(3, 3, -4, -3, 3).unwrap(),
                GroupElement::new(0, 3, -1, 0, 3).unwrap(),
            ]
        );
        assert_eq!(g123.length_int(), Some(BigInt::from(5)));

        let g122 = weierstrass(one(), r(1, 2), r(2, 1)).unwrap();
        assert_eq!(g122.length_int(), Some(BigInt::from(4)));

        // non-integral single tile: translation length 1 + k3 + k2·k3 = 7/2
        let g = weierstrass(one(), r(2, 3), r(3, 2)).unwrap();
        assert_eq!(g.length(), &r(7, 2));
        assert_eq!(g.length_int(), None);
    }

    #[test]
    fn group_relation_is_peripheral_translation() {
        for j in [two_delta1(), ja(), assemble(JigsawSpec {
            tiles: vec![TileType::delta(1), TileType::delta(2)],
            gluings: vec![Gluing { tile_a: 0, side_a: S::S2, tile_b: 1, side_b: S::S1 }],
        })
        .unwrap()]
        {
            let l = j.fundamental_length().unwrap().clone();
            let g = group(j);
            assert_eq!(g.translation(), &GroupElement::translation(l));
            assert_eq!(g.evaluate(&g.translation_word()), *g.translation());
        }
    }

    #[test]
    fn two_delta1_is_unimodular() {
        let g = group(two_delta1());
        for e in g.generators() {
            assert!(e.scale().is_one(), "all labels 1 forces d = 1: {e:?}");
        }
    }

    #[test]
    fn ja_has_six_generators_and_l18() {
        let g = group(ja());
        assert_eq!(g.generators().len(), 6);
        assert_eq!(g.translation(), &GroupElement::translation(18));
    }

    #[test]
    fn census_examples() {
        let d1 = TileType::delta(1);
        let d2 = TileType::delta(2);
        let d3 = TileType::delta(3);
        // exactly one two-tile jigsaw over {Δ¹}
        let c = census(&[d1.clone()], 2).unwrap();
        assert_eq!(c.iter().filter(|j| j.size() == 2).count(), 1);
        // exactly one size-2 jigsaw over {Δ¹, Δ²} using both tiles
        let c = census(&[d1.clone(), d2], 2).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].size(), 2);
        // J_A appears in the size-4 census over {Δ¹, Δ³}
        let c = census(&[d1, d3], 4).unwrap();
        let ja_key = ja().canonical_key();
        assert!(c.iter().any(|j| j.canonical_key() == ja_key));
    }

    #[test]
    fn canonical_key_invariance() {
        // two relabelings of J_A
        let d3 = TileType::delta(3);
        let relabeled = assemble(JigsawSpec {
            tiles: vec![d3.clone(), TileType::delta(1), d3.clone(), d3],
            gluings: vec![
                Gluing { tile_a: 1, side_a: S::S2, tile_b: 0, side_b: S::S1 },
                Gluing { tile_a: 1, side_a: S::S3, tile_b: 2, side_b: S::S1 },
                Gluing { tile_a: 3, side_a: S::S1, tile_b: 1, side_b: S::S1 },
            ],
        })
        .unwrap();
        assert_eq!(relabeled.canonical_key(), ja().canonical_key());
        // different sizes → different keys
        assert_ne!(two_delta1().canonical_key(), ja().canonical_key());
    }

    #[test]
    fn mirror_images_are_distinct() {
        // a chiral 3-tile S(1,3) jigsaw and its mirror
        let d1 = TileType::delta(1);
        let d3 = TileType::delta(3);
        let j = assemble(JigsawSpec {
            tiles: vec![d1.clone(), d3.clone(), d3.clone()],
            gluings: vec![
                Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 },
                Gluing { tile_a: 1, side_a: S::S3, tile_b: 2, side_b: S::S3 },
            ],
        })
        .unwrap();
        let mirror = assemble(JigsawSpec {
            tiles: vec![d1, d3.clone(), d3],
            gluings: vec![
                Gluing { tile_a: 0, side_a: S::S1, tile_b: 1, side_b: S::S1 },
                Gluing { tile_a: 1, side_a: S::S2, tile_b: 2, side_b: S::S2 },
            ],
        })
        .unwrap();
        assert_ne!(j.canonical_key(), mirror.canonical_key());
    }

    #[test]
    fn spec_json_roundtrip() {
        let text = r#"{"tiles": [1, 3, 3, 3],
                       "gluings": [[0,1,1,1],[0,2,2,1],[0,3,3,1]]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(assemble(spec.clone()).unwrap().canonical_key(), ja().canonical_key());
        let ser = serialize_spec(&spec);
        assert_eq!(parse_spec(&ser).unwrap(), spec);
        assert_eq!(serialize_spec(&parse_spec(&ser).unwrap()), ser);
        // full rational form parses too
        let full = r#"{"tiles": [[1,1,1,2,2,1]], "gluings": []}"#;
        assert_eq!(parse_spec(full).unwrap().tiles[0], TileType::delta(2));
        assert!(parse_spec("{").is_err());
        assert!(parse_spec(r#"{"tiles": [[1,2,3]]}"#).is_err());
        assert!(parse_spec(r#"{"tiles": [1], "gluings": [[0,4,0,1]]}"#).is_err());
    }
}
