//! Marked ideal triangle tiles `Δ(k₁,k₂,k₃)`.
//!
//! A tile is a positively oriented ideal triangle with one marked point on
//! each side, determined up to isometry by a triple of positive rationals
//! with `k₁k₂k₃ = 1` (balanced). In standard position the vertices are
//! `v₁ = ∞, v₂ = −1, v₃ = 0` and the sides are `s₁ = [v₁,v₂]`,
//! `s₂ = [v₂,v₃]`, `s₃ = [v₃,v₁]`. Marked points are stored as
//! `(x, h²)` pairs so heights like `√2` never materialize as radicals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("tile parameters must be positive")]
    NotPositive,
    #[error("tile is not balanced: k1·k2·k3 = {product} ≠ 1")]
    NotBalanced { product: BigRational },
}

/// One of the three sides of a tile, `1..=3`, in the fixed orientation
/// convention (`s₁ = [v₁,v₂]`, `s₂ = [v₂,v₃]`, `s₃ = [v₃,v₁]`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideIndex(u8);

impl SideIndex {
    pub const S1: SideIndex = SideIndex(1);
    pub const S2: SideIndex = SideIndex(2);
    pub const S3: SideIndex = SideIndex(3);
    pub const ALL: [SideIndex; 3] = [Self::S1, Self::S2, Self::S3];

    pub fn new(i: u8) -> Option<Self> {
        (1..=3).contains(&i).then_some(SideIndex(i))
    }

    pub fn index0(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index0(i: usize) -> Self {
        SideIndex((i % 3) as u8 + 1)
    }

    /// Cyclically next side (counterclockwise around the tile).
    pub fn next(self) -> Self {
        SideIndex(self.0 % 3 + 1)
    }

    pub fn prev(self) -> Self {
        SideIndex((self.0 + 1) % 3 + 1)
    }
}

impl fmt::Debug for SideIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for SideIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rational balanced marked triangle, stored in its canonical cyclic
/// rotation. Reflections are distinct tile types: `Δ(k₁,k₂,k₃)` is not the
/// same marked triangle as `Δ(k₂,k₁,k₃)` in general.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TileType {
    params: [BigRational; 3],
}

/// Tiles order by the `(numerator, denominator)` keys of their canonical
/// parameters, so `Δ⁽¹⁾ < Δ⁽²⁾ < Δ⁽³⁾ < …`.
impl Ord for TileType {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |t: &TileType| t.params.clone().map(|k| rational_key(&k));
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for TileType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn rational_key(r: &BigRational) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}

impl TileType {
    /// Build `Δ(k₁,k₂,k₃)`, verifying balance and storing the
    /// lexicographically least cyclic rotation (keys `(numerator,
    /// denominator)` per entry).
    pub fn new(k1: BigRational, k2: BigRational, k3: BigRational) -> Result<Self, TileError> {
        if !k1.is_positive() || !k2.is_positive() || !k3.is_positive() {
            return Err(TileError::NotPositive);
        }
        let product = &k1 * &k2 * &k3;
        if !product.is_one() {
            return Err(TileError::NotBalanced { product });
        }
        let params = [k1, k2, k3];
        let best = (0..3)
            .min_by(|&a, &b| {
                for i in 0..3 {
                    let ka = rational_key(&params[(a + i) % 3]);
                    let kb = rational_key(&params[(b + i) % 3]);
                    match ka.cmp(&kb) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            })
            .unwrap();
        Ok(TileType {
            params: [
                params[best].clone(),
                params[(best + 1) % 3].clone(),
                params[(best + 2) % 3].clone(),
            ],
        })
    }

    /// The integral tile `Δ⁽ⁿ⁾ = Δ(1, 1/n, n)`.
    pub fn delta(n: u64) -> Self {
        assert!(n >= 1);
        let one = BigRational::one();
        let n = BigRational::from(BigInt::from(n));
        TileType::new(one, n.recip(), n).expect("Δ(1,1/n,n) is balanced")
    }

    pub fn params(&self) -> &[BigRational; 3] {
        &self.params
    }

    pub fn label(&self, side: SideIndex) -> &BigRational {
        &self.params[side.index0()]
    }

    /// `Some(n)` when this tile is `Δ⁽ⁿ⁾`, i.e. the canonical rotation is
    /// exactly `(1, 1/n, n)`.
    pub fn integral(&self) -> Option<BigInt> {
        let [a, b, c] = &self.params;
        if a.is_one() && b.numer().is_one() && c.denom().is_one() && *c == b.recip() {
            Some(c.numer().clone())
        } else {
            None
        }
    }

    /// Marked points of the tile in standard position, as
    /// `(x, h²)` pairs: `x₁ = (−1, 1/k₁)`, `x₂ = (−1/(1+k₂), k₂/(1+k₂)²)`,
    /// `x₃ = (0, k₃)`.
    pub fn std_marked_points(&self) -> [(BigRational, BigRational); 3] {
        standard_marked_points(&self.params)
    }

    /// Standard involutions `ι₁, ι₂, ι₃` about the marked points.
    pub fn std_involutions(&self) -> [GroupElement; 3] {
        standard_involutions(&self.params)
    }

    /// Side `i` of `self` matches side `j` of `other` when the parameters
    /// are equal as rationals.
    pub fn sides_match(&self, i: SideIndex, other: &TileType, j: SideIndex) -> bool {
        self.label(i) == other.label(j)
    }
}

impl fmt::Debug for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.integral() {
            write!(f, "Δ({n})")
        } else {
            write!(f, "Δ({}, {}, {})", self.params[0], self.params[1], self.params[2])
        }
    }
}

/// Marked points for an arbitrary (possibly rotated) parameter triple in
/// standard position.
pub fn standard_marked_points(k: &[BigRational; 3]) -> [(BigRational, BigRational); 3] {
    let one = BigRational::one();
    let x1 = (-one.clone(), k[0].recip());
    let d2 = &one + &k[1];
    let x2 = (-d2.recip(), &k[1] / (&d2 * &d2));
    let x3 = (BigRational::zero(), k[2].clone());
    [x1, x2, x3]
}

/// Standard involutions for an arbitrary parameter triple, as canonical
/// group elements. For `k = p/q` in lowest terms the integral forms are
///
/// ```text
/// ι₁ = (1/√(pq))·[[p, p+q], [−p, −p]]
/// ι₂ = (1/√(pq))·[[q, q], [−(p+q), −q]]
/// ι₃ = (1/√(pq))·[[0, p], [−q, 0]]
/// ```
pub fn standard_involutions(k: &[BigRational; 3]) -> [GroupElement; 3] {
    let i1 = {
        let (p, q) = (k[0].numer().clone(), k[0].denom().clone());
        GroupElement::new(p.clone(), &p + &q, -&p, -&p, &p * &q)
    };
    let i2 = {
        let (p, q) = (k[1].numer().clone(), k[1].denom().clone());
        GroupElement::new(q.clone(), q.clone(), -(&p + &q), -&q, &p * &q)
    };
    let i3 = {
        let (p, q) = (k[2].numer().clone(), k[2].denom().clone());
        GroupElement::new(BigInt::zero(), p.clone(), -&q, BigInt::zero(), &p * &q)
    };
    [
        i1.expect("ι₁ has det pq"),
        i2.expect("ι₂ has det pq"),
        i3.expect("ι₃ has det pq"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExtendedRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn construction_and_canonical_rotation() {
        let t = TileType::new(rat(3, 1), rat(1, 1), rat(1, 3)).unwrap();
        assert_eq!(t, TileType::delta(3));
        assert_eq!(t.params(), &[rat(1, 1), rat(1, 3), rat(3, 1)]);
        assert_eq!(TileType::delta(1).integral(), Some(1.into()));
        assert!(matches!(
            TileType::new(rat(1, 1), rat(2, 1), rat(3, 1)),
            Err(TileError::NotBalanced { .. })
        ));
        // reflections are distinct types
        let refl = TileType::new(rat(1, 3), rat(1, 1), rat(3, 1)).unwrap();
        assert_ne!(refl, TileType::delta(3));
    }

    #[test]
    fn marked_point_examples() {
        let [_, _, x3] = TileType::delta(1).std_marked_points();
        assert_eq!(x3, (rat(0, 1), rat(1, 1)));
        let [_, _, x3] = TileType::delta(2).std_marked_points();
        assert_eq!(x3, (rat(0, 1), rat(2, 1)));
        let [_, x2, _] = TileType::delta(3).std_marked_points();
        assert_eq!(x2, (rat(-3, 4), rat(3, 16)));
    }

    #[test]
    fn involution_matrices_match_printed_generators() {
        // Δ(1,1,1)
        let [i1, i2, i3] = TileType::delta(1).std_involutions();
        assert_eq!(i1, GroupElement::new(1, 2, -1, -1, 1).unwrap());
        assert_eq!(i2, GroupElement::new(1, 1, -2, -1, 1).unwrap());
        assert_eq!(i3, GroupElement::new(0, 1, -1, 0, 1).unwrap());
        // Δ(1,1/2,2)
        let [j1, j2, j3] = TileType::delta(2).std_involutions();
        assert_eq!(j1, i1);
        assert_eq!(j2, GroupElement::new(2, 2, -3, -2, 2).unwrap());
        assert_eq!(j3, GroupElement::new(0, 2, -1, 0, 2).unwrap());
        // Δ(1,1/3,3)
        let [k1, k2, k3] = TileType::delta(3).std_involutions();
        assert_eq!(k1, i1);
        assert_eq!(k2, GroupElement::new(3, 3, -4, -3, 3).unwrap());
        assert_eq!(k3, GroupElement::new(0, 3, -1, 0, 3).unwrap());
    }

    #[test]
    fn involutions_fix_marked_points() {
        for t in [
            TileType::delta(1),
            TileType::delta(2),
            TileType::delta(3),
            TileType::new(rat(2, 3), rat(1, 2), rat(3, 1)).unwrap(),
        ] {
            let points = t.std_marked_points();
            for (inv, (x, h2)) in t.std_involutions().iter().zip(points.iter()) {
                assert!(inv.is_involution());
                assert!(inv.trace().is_zero());
                let (x2, h2b) = inv.apply_upper(x, h2);
                assert_eq!((&x2, &h2b), (x, h2), "marked point moved under {inv:?}");
            }
        }
    }

    #[test]
    fn product_of_involutions_is_parabolic() {
        for t in [
            TileType::delta(1),
            TileType::delta(3),
            TileType::new(rat(5, 2), rat(4, 5), rat(1, 2)).unwrap(),
        ] {
            let [i1, i2, i3] = t.std_involutions();
            let g = i1.compose(&i2).compose(&i3);
            assert_eq!(g.trace_squared(), BigRational::from(BigInt::from(4)));
            assert_eq!(g.apply(&ExtendedRational::infinity()), ExtendedRational::infinity());
        }
    }

    #[test]
    fn matching_rule() {
        let d1 = TileType::delta(1);
        let d2 = TileType::delta(2);
        let d3 = TileType::delta(3);
        // Δ² side labeled 2 vs Δ² side labeled 2
        assert!(d2.sides_match(SideIndex::S3, &d2, SideIndex::S3));
        // Δ¹ any side vs Δ³ side labeled 1
        assert!(d1.sides_match(SideIndex::S2, &d3, SideIndex::S1));
        // 3 ≠ 1/3
        assert!(!d3.sides_match(SideIndex::S3, &d3, SideIndex::S2));
    }
}
