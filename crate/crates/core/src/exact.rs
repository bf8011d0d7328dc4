//! Exact arithmetic for boundary points and group elements.
//!
//! Boundary points live in the projective rational line `Q ∪ {∞}` and are
//! stored in lowest terms with `∞ = 1/0`. Group elements are matrices of the
//! form `(1/√d)·M` with `M` integral and `det M = d > 0`; the scalar `√d`
//! cancels in the Möbius action, so all geometry stays inside `Q`, while
//! `(tr)²/d` is an exact rational invariant of the projective class.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors from constructing or using group elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero matrix cannot represent a group element")]
    ZeroMatrix,
    #[error("no rescaling gives det(M) = d (det = {det}, d = {d})")]
    DeterminantMismatch { det: BigInt, d: BigInt },
    #[error("identity element has no isolated fixed points")]
    IdentityElement,
}

/// A point of `Q ∪ {∞}` in lowest terms. `∞` is `1/0`; otherwise `den > 0`
/// and `gcd(|num|, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRational {
    num: BigInt,
    den: BigInt,
}

impl ExtendedRational {
    /// Reduce `num/den` to canonical form. `den = 0` yields `∞`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (mut num, mut den) = (num.into(), den.into());
        if den.is_zero() {
            return Self::infinity();
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        ExtendedRational { num, den }
    }

    pub fn infinity() -> Self {
        ExtendedRational { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExtendedRational { num: n.into(), den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        ExtendedRational { num: r.numer().clone(), den: r.denom().clone() }
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    /// Denominator; `0` exactly for `∞`.
    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    /// The finite value as a rational, or `None` for `∞`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_infinity() {
            None
        } else {
            Some(BigRational::new(self.num.clone(), self.den.clone()))
        }
    }

    /// Parse "p/q", "p", or "inf"/"oo".
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "oo" | "∞") {
            return Some(Self::infinity());
        }
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Self::new(p, q))
            }
            None => Some(Self::from_integer(s.parse::<BigInt>().ok()?)),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total order used for sorting and map keys: finite values by value, `∞`
/// greater than everything. Cyclic boundary order is handled separately by
/// [`in_open_arc`]; never use this order for arc membership.
impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            // p/q < r/s  iff  p·s < r·q  (both q, s > 0)
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Membership of `x` in the open counterclockwise arc from `a` to `b` on
/// `∂H² = R ∪ {∞}`. Counterclockwise means increasing along `R`, wrapping
/// through `∞`. Endpoints are excluded.
pub fn in_open_arc(x: &ExtendedRational, a: &ExtendedRational, b: &ExtendedRational) -> bool {
    assert!(a != b, "degenerate arc");
    if x == a || x == b {
        return false;
    }
    match (a.is_infinity(), b.is_infinity()) {
        (true, _) => x.is_infinity() || x < b,
        (_, true) => !x.is_infinity() && x > a,
        (false, false) => {
            if x.is_infinity() {
                a > b
            } else if a < b {
                a < x && x < b
            } else {
                x > a || x < b
            }
        }
    }
}

/// A group element `(1/√d)·M` in canonical form: `M` integral, `det M = d > 0`,
/// no integer `s > 1` divides all four entries, and the first nonzero entry
/// of `(m11, m12, m21, m22)` is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    m: [BigInt; 4],
    d: BigInt,
}

impl GroupElement {
    /// Canonicalize `(M, d)`. Fails on the zero matrix or when `det M ≠ d`
    /// (no rescaling `(λM, λ²d)` can repair the ratio `det/d`).
    pub fn new(
        m11: impl Into<BigInt>,
        m12: impl Into<BigInt>,
        m21: impl Into<BigInt>,
        m22: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        let mut m = [m11.into(), m12.into(), m21.into(), m22.into()];
        let mut d = d.into();
        if m.iter().all(|e| e.is_zero()) {
            return Err(ExactError::ZeroMatrix);
        }
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        if det != d || !d.is_positive() {
            return Err(ExactError::DeterminantMismatch { det, d });
        }
        // s | all entries implies s² | det = d, so the extractable scalar is
        // exactly the entry gcd.
        let mut s = BigInt::zero();
        for e in &m {
            s = s.gcd(e);
        }
        if !s.is_one() {
            for e in &mut m {
                *e /= &s;
            }
            d /= &s * &s;
        }
        if m.iter().find(|e| !e.is_zero()).is_some_and(Signed::is_negative) {
            for e in &mut m {
                *e = -&*e;
            }
        }
        Ok(GroupElement { m, d })
    }

    pub fn identity() -> Self {
        GroupElement { m: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()], d: BigInt::one() }
    }

    /// The translation `z ↦ z + t`.
    pub fn translation(t: impl Into<BigInt>) -> Self {
        Self::new(1, t, 0, 1, 1).expect("translation is unimodular")
    }

    /// Translation by an arbitrary rational length.
    pub fn translation_by(t: &BigRational) -> Self {
        let q = t.denom().clone();
        Self::new(q.clone(), t.numer().clone(), BigInt::zero(), q.clone(), &q * &q)
            .expect("rational translation has det q²")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.m
    }

    pub fn scale(&self) -> &BigInt {
        &self.d
    }

    /// Group law: `(1/√(d g d h))·(M_g M_h)`, canonicalized.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        Self::new(
            &a[0] * &b[0] + &a[1] * &b[2],
            &a[0] * &b[1] + &a[1] * &b[3],
            &a[2] * &b[0] + &a[3] * &b[2],
            &a[2] * &b[1] + &a[3] * &b[3],
            &self.d * &other.d,
        )
        .expect("product of group elements stays valid")
    }

    /// Inverse via the adjugate: `adj(M)/√d` represents `g⁻¹`.
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self::new(m[3].clone(), -&m[1], -&m[2], m[0].clone(), self.d.clone())
            .expect("adjugate of a group element stays valid")
    }

    /// Möbius action on `Q ∪ {∞}`; the `√d` scalar cancels.
    pub fn apply(&self, x: &ExtendedRational) -> ExtendedRational {
        let m = &self.m;
        ExtendedRational::new(
            &m[0] * x.numer() + &m[1] * x.denom(),
            &m[2] * x.numer() + &m[3] * x.denom(),
        )
    }

    /// Image of a point `x + h·i` of `H²`, carried as `(x, h²)` with both
    /// coordinates rational. Exact since `h` only enters through `h²`.
    pub fn apply_upper(&self, x: &BigRational, h2: &BigRational) -> (BigRational, BigRational) {
        let [a, b, c, d] = &self.m;
        let (a, b) = (BigRational::from(a.clone()), BigRational::from(b.clone()));
        let (c, d) = (BigRational::from(c.clone()), BigRational::from(d.clone()));
        let det = BigRational::from(self.d.clone());
        let axb = &a * x + &b;
        let cxd = &c * x + &d;
        let denom = &cxd * &cxd + &c * &c * h2;
        let new_x = (&axb * &cxd + &a * &c * h2) / &denom;
        let new_h2 = h2 * (&det * &det) / (&denom * &denom);
        (new_x, new_h2)
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0] + &self.m[3]
    }

    /// `(tr M)²/d`, a conjugation- and sign-invariant rational.
    pub fn trace_squared(&self) -> BigRational {
        let t = self.trace();
        BigRational::new(&t * &t, self.d.clone())
    }

    /// Isometry type from the sign of `tr² − 4d`.
    pub fn classify(&self) -> ElementClass {
        let t = self.trace();
        match (&t * &t).cmp(&(BigInt::from(4) * &self.d)) {
            Ordering::Less => ElementClass::Elliptic,
            Ordering::Equal => ElementClass::Parabolic,
            Ordering::Greater => ElementClass::Hyperbolic,
        }
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.compose(self).is_identity()
    }

    /// Fixed points on `∂H²` that lie in `Q ∪ {∞}`, sorted.
    ///
    /// Elliptic elements have none on the boundary; parabolics have one;
    /// hyperbolics have two, rational exactly when `tr² − 4d` is a perfect
    /// square (otherwise the axis endpoints are irrational and the result is
    /// empty).
    pub fn rational_fixed_points(&self) -> Result<Vec<ExtendedRational>, ExactError> {
        if self.is_identity() {
            return Err(ExactError::IdentityElement);
        }
        let [a, b, c, d] = &self.m;
        let mut points = Vec::new();
        if c.is_zero() {
            points.push(ExtendedRational::infinity());
            if a != d {
                points.push(ExtendedRational::new(b.clone(), d - a));
            }
        } else {
            // c z² + (d − a) z − b = 0, discriminant tr² − 4 det
            let disc = {
                let t = a + d;
                &t * &t - BigInt::from(4) * &self.d
            };
            if !disc.is_negative() {
                let root = disc.sqrt();
                if &root * &root == disc {
                    let two_c = BigInt::from(2) * c;
                    points.push(ExtendedRational::new(a - d + &root, two_c.clone()));
                    if !root.is_zero() {
                        points.push(ExtendedRational::new(a - d - &root, two_c));
                    }
                }
            }
        }
        points.sort();
        points.dedup();
        Ok(points)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_one() {
            write!(f, "[[{}, {}], [{}, {}]]", self.m[0], self.m[1], self.m[2], self.m[3])
        } else {
            write!(
                f,
                "(1/sqrt({}))·[[{}, {}], [{}, {}]]",
                self.d, self.m[0], self.m[1], self.m[2], self.m[3]
            )
        }
    }
}

/// Isometry type of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A freely reduced word in the boundary involutions `ι_0, ι_1, …`: the
/// letter sequence `[a_1, a_2, …]` denotes `ι_{a_1}·ι_{a_2}·…`. Since every
/// generator is an involution, free reduction just cancels equal adjacent
/// letters, and the inverse is the reversed word.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right-multiply by a generator, cancelling `ι_a·ι_a`.
    pub fn push(&mut self, gen: usize) {
        if self.0.last() == Some(&gen) {
            self.0.pop();
        } else {
            self.0.push(gen);
        }
    }

    /// `self · other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &g in &other.0 {
            out.push(g);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Evaluate against a generator list.
    pub fn evaluate(&self, generators: &[GroupElement]) -> GroupElement {
        let mut acc = GroupElement::identity();
        for &g in &self.0 {
            acc = acc.compose(&generators[g]);
        }
        acc
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(m11: i64, m12: i64, m21: i64, m22: i64, d: i64) -> GroupElement {
        GroupElement::new(m11, m12, m21, m22, d).unwrap()
    }

    fn xr(n: i64, d: i64) -> ExtendedRational {
        ExtendedRational::new(n, d)
    }

    #[test]
    fn normalize_extracts_scalar() {
        assert_eq!(ge(2, 0, 0, 2, 4), GroupElement::identity());
    }

    #[test]
    fn normalize_fixes_sign() {
        assert_eq!(ge(-1, 0, 0, -1, 1), GroupElement::identity());
        // iota_3 of Delta(1,1/3,3) is already canonical
        let i3 = ge(0, 3, -1, 0, 3);
        assert_eq!(i3.entries(), &[0.into(), 3.into(), (-1).into(), 0.into()]);
        assert_eq!(i3.scale(), &BigInt::from(3));
    }

    #[test]
    fn normalize_rejects_bad_inputs() {
        assert_eq!(GroupElement::new(0, 0, 0, 0, 1), Err(ExactError::ZeroMatrix));
        assert!(matches!(
            GroupElement::new(1, 0, 0, 1, 2),
            Err(ExactError::DeterminantMismatch { .. })
        ));
        assert!(matches!(
            GroupElement::new(1, 0, 0, -1, -1),
            Err(ExactError::DeterminantMismatch { .. })
        ));
    }

    #[test]
    fn translation_algebra() {
        let t = GroupElement::translation(1);
        assert_eq!(t.compose(&t), GroupElement::translation(2));
        assert_eq!(t.inverse(), ge(1, -1, 0, 1, 1));
        assert_eq!(t.apply(&ExtendedRational::infinity()), ExtendedRational::infinity());
    }

    #[test]
    fn involutions_self_inverse() {
        let i3 = ge(0, 1, -1, 0, 1);
        assert!(i3.is_involution());
        assert_eq!(i3.inverse(), i3);
    }

    // B = (i1 i2 i1) i3 in Gamma(1,1/3,3); the running example element.
    fn element_b() -> GroupElement {
        ge(7, -6, -2, 3, 9)
    }

    #[test]
    fn mobius_action_examples() {
        let b = element_b();
        assert_eq!(b.apply(&xr(1, 1)), xr(1, 1));
        let i3 = ge(0, 1, -1, 0, 1);
        assert_eq!(i3.apply(&xr(5, 7)), xr(-7, 5));
    }

    #[test]
    fn trace_squared_examples() {
        assert_eq!(GroupElement::identity().trace_squared(), BigRational::from(BigInt::from(4)));
        assert_eq!(
            element_b().trace_squared(),
            BigRational::new(100.into(), 9.into())
        );
        // strip rotations of types 3 and 1 at distance 1: (tr h_j h_k)² = 25/3
        let hj = ge(1, -4, 1, -1, 3);
        let hk = ge(0, -1, 1, 0, 1);
        assert_eq!(
            hj.compose(&hk).trace_squared(),
            BigRational::new(25.into(), 3.into())
        );
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(
            element_b().rational_fixed_points().unwrap(),
            vec![xr(-3, 1), xr(1, 1)]
        );
        let conj = ge(-3, 24, -2, 13, 9);
        assert_eq!(conj.rational_fixed_points().unwrap(), vec![xr(2, 1), xr(6, 1)]);
        let t = GroupElement::translation(1);
        assert_eq!(t.rational_fixed_points().unwrap(), vec![ExtendedRational::infinity()]);
        assert_eq!(
            GroupElement::identity().rational_fixed_points(),
            Err(ExactError::IdentityElement)
        );
        // elliptic: no boundary fixed points
        let rot = ge(0, 1, -1, 0, 1);
        assert_eq!(rot.rational_fixed_points().unwrap(), Vec::<ExtendedRational>::new());
        // hyperbolic with irrational axis: discriminant 5
        let g = ge(2, 1, 1, 1, 1);
        assert_eq!(g.classify(), ElementClass::Hyperbolic);
        assert_eq!(g.rational_fixed_points().unwrap(), Vec::<ExtendedRational>::new());
    }

    #[test]
    fn arc_membership() {
        let inf = ExtendedRational::infinity();
        // arc (-1, 0) between the std triangle's bottom vertices
        assert!(in_open_arc(&xr(-1, 2), &xr(-1, 1), &xr(0, 1)));
        assert!(!in_open_arc(&xr(1, 2), &xr(-1, 1), &xr(0, 1)));
        assert!(!in_open_arc(&inf, &xr(-1, 1), &xr(0, 1)));
        // arc (0, ∞): positive reals
        assert!(in_open_arc(&xr(7, 2), &xr(0, 1), &inf));
        assert!(!in_open_arc(&xr(-1, 1), &xr(0, 1), &inf));
        // arc (∞, -1): reals below -1
        assert!(in_open_arc(&xr(-5, 1), &inf, &xr(-1, 1)));
        assert!(!in_open_arc(&xr(0, 1), &inf, &xr(-1, 1)));
        // wrapping arc (1, -1) passes through ∞
        assert!(in_open_arc(&inf, &xr(1, 1), &xr(-1, 1)));
        assert!(in_open_arc(&xr(-7, 1), &xr(1, 1), &xr(-1, 1)));
        assert!(!in_open_arc(&xr(0, 1), &xr(1, 1), &xr(-1, 1)));
    }

    #[test]
    fn word_reduction() {
        let mut w = Word::empty();
        w.push(0);
        w.push(1);
        w.push(1);
        w.push(0);
        assert!(w.is_empty());
        let mut v = Word::empty();
        v.push(2);
        v.push(0);
        let u = v.concat(&v.inverse());
        assert!(u.is_empty());
    }
}
