//! Rational functions, degree-one transformations and canonical keys for the
//! subfields `F_q(f)` of `F_q(X)`.
//!
//! Two rational functions of degree `n` generate the same subfield exactly when
//! the spans of their numerator and denominator coincide. A [`SubfieldKey`] is
//! the reduced row-echelon basis of that span, with columns ordered from
//! degree `n` down to 0: a monic row `hi` of degree `n` whose coefficient at
//! `deg(lo)` is zero, and a monic row `lo` of degree `< n`.

use thiserror::Error;

use crate::gf::{Elem, FieldCtx};
use crate::polyring::{format_with, Polynomial, PolyRing};

/// Default cap on the number of keys any enumeration will materialize.
pub const DEFAULT_KEY_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("rational function is constant")]
    Constant,
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration needs {needed} items, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("degree changed from {expected} to {actual} under substitution")]
    DegreeMismatch { expected: usize, actual: usize },
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Cancels the gcd and scales the denominator to be monic.
    pub fn normalize(ring: &PolyRing<'_>, num: &Polynomial, den: &Polynomial) -> Result<Self, RatError> {
        if den.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        let g = ring.gcd(num, den).expect("denominator is nonzero");
        let num = ring.div_rem(num, &g).unwrap().0;
        let den = ring.div_rem(den, &g).unwrap().0;
        if num.is_constant() && den.is_constant() {
            return Err(RatError::Constant);
        }
        let s = ring.field().inv(den.lead().unwrap()).unwrap();
        Ok(RationalMap {
            num: ring.scale(&num, s),
            den: ring.scale(&den, s),
        })
    }

    pub fn polynomial(ring: &PolyRing<'_>, f: &Polynomial) -> Result<Self, RatError> {
        Self::normalize(ring, f, &Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn format(&self, field: &FieldCtx) -> String {
        let num = format_with(field, &self.num, "X");
        if self.is_polynomial() {
            return num;
        }
        let wrap = |s: String, p: &Polynomial| {
            if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!(
            "{}/{}",
            wrap(num, &self.num),
            wrap(format_with(field, &self.den, "X"), &self.den)
        )
    }
}

/// A projective 2x2 matrix `[[a, b], [c, d]]` acting as `X -> (aX + b)/(cX + d)`,
/// scaled so that its first nonzero entry (row-major) is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusTransform {
    m: [Elem; 4],
}

impl MoebiusTransform {
    pub fn new(field: &FieldCtx, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Self, RatError> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det == 0 {
            return Err(RatError::Singular);
        }
        let m = [a, b, c, d];
        let lead = *m.iter().find(|&&x| x != 0).unwrap();
        let s = field.inv(lead).unwrap();
        Ok(MoebiusTransform { m: m.map(|x| field.mul(x, s)) })
    }

    pub fn identity() -> Self {
        MoebiusTransform { m: [1, 0, 0, 1] }
    }

    /// `X -> cX`.
    pub fn scaling(field: &FieldCtx, c: Elem) -> Result<Self, RatError> {
        Self::new(field, c, 0, 0, 1)
    }

    /// `X -> X + b`.
    pub fn translation(field: &FieldCtx, b: Elem) -> Self {
        Self::new(field, 1, b, 0, 1).expect("translations are invertible")
    }

    pub fn entries(&self) -> [Elem; 4] {
        self.m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, field: &FieldCtx, other: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let dot = |x: Elem, y: Elem, z: Elem, w: Elem| field.add(field.mul(x, y), field.mul(z, w));
        Self::new(field, dot(a, e, b, g), dot(a, f, b, h), dot(c, e, d, g), dot(c, f, d, h))
            .expect("product of invertible matrices")
    }

    pub fn inverse(&self, field: &FieldCtx) -> Self {
        let [a, b, c, d] = self.m;
        Self::new(field, d, field.neg(b), field.neg(c), a).expect("inverse is invertible")
    }

    pub fn is_central(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }
}

/// Canonical echelon basis of the span of numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubfieldKey {
    n: usize,
    hi: Polynomial,
    lo: Polynomial,
}

impl SubfieldKey {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// The two echelon rows, highest pivot first.
    pub fn rows(&self) -> (&Polynomial, &Polynomial) {
        (&self.hi, &self.lo)
    }

    /// A rational function generating this subfield.
    pub fn to_map(&self) -> RationalMap {
        RationalMap {
            num: self.hi.clone(),
            den: self.lo.clone(),
        }
    }

    fn from_dense(n: usize, hi: &[Elem], lo: &[Elem]) -> Self {
        SubfieldKey {
            n,
            hi: Polynomial::from_coeffs(hi.to_vec()),
            lo: Polynomial::from_coeffs(lo.to_vec()),
        }
    }

    fn dense(&self) -> (Vec<Elem>, Vec<Elem>) {
        let mut hi = self.hi.coeffs().to_vec();
        let mut lo = self.lo.coeffs().to_vec();
        hi.resize(self.n + 1, 0);
        lo.resize(self.n + 1, 0);
        (hi, lo)
    }
}

/// Reduces two dense rows (indexed by degree) to echelon form with columns
/// read from the top degree down. Returns the pivot degrees, or `None` when
/// the rows are dependent.
fn rref_pair(field: &FieldCtx, r0: &mut [Elem], r1: &mut [Elem]) -> Option<(usize, usize)> {
    let top = (0..r0.len()).rev().find(|&j| r0[j] != 0 || r1[j] != 0)?;
    if r0[top] == 0 {
        r0.swap_with_slice(r1);
    }
    let s = field.inv(r0[top]).unwrap();
    r0.iter_mut().for_each(|x| *x = field.mul(*x, s));
    let c = r1[top];
    if c != 0 {
        for (y, &x) in r1.iter_mut().zip(r0.iter()) {
            *y = field.sub(*y, field.mul(c, x));
        }
    }
    let low = (0..top).rev().find(|&j| r1[j] != 0)?;
    let s = field.inv(r1[low]).unwrap();
    r1.iter_mut().for_each(|x| *x = field.mul(*x, s));
    let c = r0[low];
    if c != 0 {
        for (x, &y) in r0.iter_mut().zip(r1.iter()) {
            *x = field.sub(*x, field.mul(c, y));
        }
    }
    Some((top, low))
}

/// The key of the subfield generated by `f`.
pub fn subfield_key(ring: &PolyRing<'_>, f: &RationalMap) -> SubfieldKey {
    let n = f.degree();
    let mut r0 = f.num.coeffs().to_vec();
    let mut r1 = f.den.coeffs().to_vec();
    r0.resize(n + 1, 0);
    r1.resize(n + 1, 0);
    let (top, _) = rref_pair(ring.field(), &mut r0, &mut r1)
        .expect("coprime nonconstant numerator and denominator are independent");
    debug_assert_eq!(top, n);
    SubfieldKey::from_dense(n, &r0, &r1)
}

/// Precomputed homogeneous substitution `P -> V^n P(U/V)` with
/// `(U, V) = (aX + b, cX + d)`, stored as the matrix whose row `i` holds the
/// coefficients of `U^i V^(n-i)`.
#[derive(Debug, Clone)]
pub struct KeyAction {
    n: usize,
    table: Vec<Elem>,
}

impl KeyAction {
    pub fn new(field: &FieldCtx, transform: &MoebiusTransform, n: usize) -> Self {
        let ring = PolyRing::new(field);
        let [a, b, c, d] = transform.entries();
        let u = Polynomial::from_coeffs(vec![b, a]);
        let v = Polynomial::from_coeffs(vec![d, c]);
        let mut table = vec![0; (n + 1) * (n + 1)];
        for i in 0..=n {
            let row = ring.mul(&ring.pow(&u, i as u32), &ring.pow(&v, (n - i) as u32));
            for (j, &x) in row.coeffs().iter().enumerate() {
                table[i * (n + 1) + j] = x;
            }
        }
        KeyAction { n, table }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    fn substitute(&self, field: &FieldCtx, input: &[Elem], out: &mut [Elem]) {
        let w = self.n + 1;
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &c) in input.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = &self.table[i * w..(i + 1) * w];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o = field.add(*o, field.mul(c, r));
                }
            }
        }
    }

    /// Acts on a key given as dense rows; writes the image key's dense rows.
    /// Returns the degree of the image's low row.
    pub fn apply_dense(
        &self,
        field: &FieldCtx,
        hi: &[Elem],
        lo: &[Elem],
        out_hi: &mut [Elem],
        out_lo: &mut [Elem],
    ) -> usize {
        self.substitute(field, hi, out_hi);
        self.substitute(field, lo, out_lo);
        let (top, low) = rref_pair(field, out_hi, out_lo).expect("substitution is invertible");
        assert_eq!(top, self.n, "substitution preserves degree");
        low
    }

    pub fn apply(&self, field: &FieldCtx, key: &SubfieldKey) -> SubfieldKey {
        let (hi, lo) = key.dense();
        let mut oh = vec![0; self.n + 1];
        let mut ol = vec![0; self.n + 1];
        self.apply_dense(field, &hi, &lo, &mut oh, &mut ol);
        SubfieldKey::from_dense(self.n, &oh, &ol)
    }
}

/// `f o phi_A`, normalized; the degree is preserved.
pub fn act(ring: &PolyRing<'_>, f: &RationalMap, transform: &MoebiusTransform) -> Result<RationalMap, RatError> {
    let n = f.degree();
    let field = ring.field();
    let action = KeyAction::new(field, transform, n);
    let mut num = f.num.coeffs().to_vec();
    let mut den = f.den.coeffs().to_vec();
    num.resize(n + 1, 0);
    den.resize(n + 1, 0);
    let mut out_num = vec![0; n + 1];
    let mut out_den = vec![0; n + 1];
    action.substitute(field, &num, &mut out_num);
    action.substitute(field, &den, &mut out_den);
    let g = RationalMap::normalize(
        ring,
        &Polynomial::from_coeffs(out_num),
        &Polynomial::from_coeffs(out_den),
    )?;
    if g.degree() != n {
        return Err(RatError::DegreeMismatch { expected: n, actual: g.degree() });
    }
    Ok(g)
}

/// Whether the subfield with this key is mapped to itself by `transform`.
pub fn is_fixed(field: &FieldCtx, key: &SubfieldKey, transform: &MoebiusTransform) -> bool {
    KeyAction::new(field, transform, key.n).apply(field, key) == *key
}

/// Packs keys of a fixed degree into integers and back.
///
/// Layout, most significant first: the low row's degree `m`, the `n - 1` free
/// lower coefficients of the high row (skipping position `m`, which is zero),
/// then the `m` lower coefficients of the low row padded to `n - 1` digits.
#[derive(Debug, Clone, Copy)]
pub struct KeyCodec {
    q: u64,
    n: usize,
    block: u64,
}

impl KeyCodec {
    pub fn new(field: &FieldCtx, n: usize) -> Self {
        assert!(n >= 1);
        let q = field.q() as u64;
        let block = q.checked_pow(n as u32 - 1).expect("key code fits in u64");
        (n as u64)
            .checked_mul(block)
            .and_then(|x| x.checked_mul(block))
            .expect("key code fits in u64");
        KeyCodec { q, n, block }
    }

    pub fn encode_dense(&self, hi: &[Elem], lo: &[Elem], m: usize) -> u64 {
        let mut h = 0u64;
        for j in (0..self.n).rev() {
            if j != m {
                h = h * self.q + hi[j] as u64;
            }
        }
        let mut l = 0u64;
        for j in (0..m).rev() {
            l = l * self.q + lo[j] as u64;
        }
        (m as u64 * self.block + h) * self.block + l
    }

    pub fn decode_dense(&self, code: u64, hi: &mut [Elem], lo: &mut [Elem]) -> usize {
        let mut l = code % self.block;
        let rest = code / self.block;
        let mut h = rest % self.block;
        let m = (rest / self.block) as usize;
        hi.iter_mut().for_each(|x| *x = 0);
        lo.iter_mut().for_each(|x| *x = 0);
        hi[self.n] = 1;
        lo[m] = 1;
        for j in 0..self.n {
            if j != m {
                hi[j] = (h % self.q) as Elem;
                h /= self.q;
            }
        }
        for x in lo.iter_mut().take(m) {
            *x = (l % self.q) as Elem;
            l /= self.q;
        }
        m
    }

    pub fn encode(&self, key: &SubfieldKey) -> u64 {
        let (hi, lo) = key.dense();
        self.encode_dense(&hi, &lo, key.lo.degree().unwrap())
    }

    pub fn decode(&self, code: u64) -> SubfieldKey {
        let mut hi = vec![0; self.n + 1];
        let mut lo = vec![0; self.n + 1];
        self.decode_dense(code, &mut hi, &mut lo);
        SubfieldKey::from_dense(self.n, &hi, &lo)
    }
}

/// Number of degree-`n` subfields, `q^(2(n-1))`, saturating.
pub fn subfield_count(q: u64, n: usize) -> u64 {
    q.checked_pow(2 * (n as u32).saturating_sub(1)).unwrap_or(u64::MAX)
}

/// Every degree-`n` subfield key exactly once, grouped by the low row's degree.
pub fn enumerate_subfield_keys(
    field: &FieldCtx,
    n: usize,
    budget: u64,
) -> Result<impl Iterator<Item = SubfieldKey> + '_, RatError> {
    assert!(n >= 1, "subfield index must be positive");
    let needed = subfield_count(field.q() as u64, n);
    if needed > budget {
        return Err(RatError::BudgetExceeded { needed, budget });
    }
    let ring = PolyRing::new(field);
    let q = field.q() as u64;
    let iter = (0..n).flat_map(move |m| {
        let highs = q.pow(n as u32 - 1);
        ring.monic_of_degree(m).flat_map(move |lo| {
            (0..highs).filter_map(move |mut t| {
                let mut c = vec![0; n + 1];
                c[n] = 1;
                for (j, x) in c.iter_mut().enumerate().take(n) {
                    if j != m {
                        *x = (t % q) as Elem;
                        t /= q;
                    }
                }
                let hi = Polynomial::from_coeffs(c);
                ring.is_coprime(&hi, &lo).then(|| SubfieldKey {
                    n,
                    hi,
                    lo: lo.clone(),
                })
            })
        })
    });
    Ok(iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[Elem]) -> Polynomial {
        Polynomial::from_coeffs(c.to_vec())
    }

    #[test]
    fn normalize_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let r = PolyRing::new(&f2);
        let f = RationalMap::normalize(&r, &poly(&[0, 1, 1]), &Polynomial::x()).unwrap();
        assert_eq!(f.num(), &poly(&[1, 1]));
        assert_eq!(f.den(), &Polynomial::one());
        let g = RationalMap::normalize(&r, &Polynomial::monomial(1, 3), &poly(&[1, 1])).unwrap();
        assert_eq!(g.num(), &Polynomial::monomial(1, 3));
        assert_eq!(g.degree(), 3);
        let x2 = Polynomial::monomial(1, 2);
        assert_eq!(RationalMap::normalize(&r, &x2, &x2), Err(RatError::Constant));
        assert_eq!(
            RationalMap::normalize(&r, &x2, &Polynomial::zero()),
            Err(RatError::ZeroDenominator)
        );
    }

    #[test]
    fn key_of_x2_over_x_plus_1() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let r = PolyRing::new(&f2);
        let f = RationalMap::normalize(&r, &Polynomial::monomial(1, 2), &poly(&[1, 1])).unwrap();
        let key = subfield_key(&r, &f);
        assert_eq!(key.rows(), (&Polynomial::monomial(1, 2), &poly(&[1, 1])));
    }

    #[test]
    fn key_ignores_left_composition() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = PolyRing::new(&f3);
        let (p, q) = (poly(&[1, 0, 2, 1]), poly(&[2, 1]));
        let base = subfield_key(&r, &RationalMap::normalize(&r, &p, &q).unwrap());
        for a in f3.elements() {
            for b in f3.elements() {
                for c in f3.elements() {
                    for d in f3.elements() {
                        if f3.sub(f3.mul(a, d), f3.mul(b, c)) == 0 {
                            continue;
                        }
                        let num = r.add(&r.scale(&p, a), &r.scale(&q, b));
                        let den = r.add(&r.scale(&p, c), &r.scale(&q, d));
                        let g = RationalMap::normalize(&r, &num, &den).unwrap();
                        assert_eq!(subfield_key(&r, &g), base);
                    }
                }
            }
        }
    }

    #[test]
    fn key_counts() {
        for (q, n, expected) in [(2u64, 1usize, 1usize), (2, 2, 4), (3, 3, 81), (4, 2, 16), (5, 2, 25)] {
            let f = FieldCtx::of_order(q).unwrap();
            let keys: Vec<_> = enumerate_subfield_keys(&f, n, DEFAULT_KEY_BUDGET).unwrap().collect();
            assert_eq!(keys.len(), expected);
            let set: std::collections::HashSet<_> = keys.iter().collect();
            assert_eq!(set.len(), expected);
            for k in &keys {
                let (hi, lo) = k.rows();
                assert!(hi.is_monic() && lo.is_monic());
                assert_eq!(hi.coeff(lo.degree().unwrap()), 0);
            }
        }
    }

    #[test]
    fn enumeration_respects_budget() {
        let f = FieldCtx::new(3, 1).unwrap();
        assert!(matches!(
            enumerate_subfield_keys(&f, 3, 80),
            Err(RatError::BudgetExceeded { needed: 81, budget: 80 })
        ));
    }

    #[test]
    fn act_examples() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = PolyRing::new(&f3);
        let x2 = RationalMap::polynomial(&r, &Polynomial::monomial(1, 2)).unwrap();
        assert_eq!(act(&r, &x2, &MoebiusTransform::identity()).unwrap(), x2);
        let two_x = MoebiusTransform::scaling(&f3, 2).unwrap();
        let img = act(&r, &x2, &two_x).unwrap();
        assert_eq!(img.num(), &Polynomial::monomial(1, 2));
        assert_eq!(subfield_key(&r, &img), subfield_key(&r, &x2));
        assert!(is_fixed(&f3, &subfield_key(&r, &x2), &two_x));
        let a = MoebiusTransform::new(&f3, 1, 2, 1, 0).unwrap();
        let f = RationalMap::normalize(&r, &poly(&[1, 0, 2, 1]), &poly(&[0, 1])).unwrap();
        let back = act(&r, &act(&r, &f, &a).unwrap(), &a.inverse(&f3)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn x2_plus_x_under_translation() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = PolyRing::new(&f3);
        let f = RationalMap::polynomial(&r, &poly(&[0, 1, 1])).unwrap();
        let t = MoebiusTransform::translation(&f3, 1);
        // (X+1)^2 + (X+1) = X^2 + 2 X + 2 is not a left translate of X^2 + X
        assert!(!is_fixed(&f3, &subfield_key(&r, &f), &t));
    }

    #[test]
    fn codec_roundtrip() {
        let f = FieldCtx::new(3, 1).unwrap();
        let codec = KeyCodec::new(&f, 3);
        let mut codes: Vec<u64> = enumerate_subfield_keys(&f, 3, DEFAULT_KEY_BUDGET)
            .unwrap()
            .map(|k| {
                let c = codec.encode(&k);
                assert_eq!(codec.decode(c), k);
                c
            })
            .collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), 81);
    }

    #[test]
    fn moebius_canonical_scaling() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let a = MoebiusTransform::new(&f5, 2, 4, 0, 2).unwrap();
        let b = MoebiusTransform::new(&f5, 1, 2, 0, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(MoebiusTransform::new(&f5, 1, 2, 2, 4), Err(RatError::Singular));
        assert!(MoebiusTransform::new(&f5, 3, 0, 0, 3).unwrap().is_central());
        let c = MoebiusTransform::new(&f5, 0, 3, 1, 2).unwrap();
        assert_eq!(c.entries(), [0, 1, 2, 4]);
    }

    #[test]
    fn formatting() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = PolyRing::new(&f3);
        let f = RationalMap::normalize(&r, &poly(&[2, 0, 1]), &Polynomial::x()).unwrap();
        assert_eq!(f.format(&f3), "(X^2+2)/X");
        let g = RationalMap::polynomial(&r, &Polynomial::monomial(1, 2)).unwrap();
        assert_eq!(g.format(&f3), "X^2");
    }
}
