//! Brute-force counts that use no closed form.
//!
//! Rational-function classes are counted as orbits of `GL(2, q)` on the set of
//! degree-`n` subfield keys, both by Burnside over conjugacy classes and by
//! explicit orbit closure. Polynomial classes are orbits of the right affine
//! action on monic polynomials with zero constant term.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{self, AffineClass, BigCount, CountError};
use crate::gf::{Elem, ExtFieldCtx, FieldCtx, FieldError};
use crate::polyring::{self_dual_scalar, tilde, PolyRing, Polynomial};
use crate::ratmap::{subfield_count, KeyAction, KeyCodec, MoebiusTransform, RatError};

pub use crate::ratmap::DEFAULT_KEY_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("cell needs {needed} enumerated items, budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("Burnside sum is not an integer")]
    NonIntegral,
}

fn check_budget(needed: u64, budget: u64) -> Result<(), OracleError> {
    if needed > budget {
        Err(OracleError::Budget { needed, budget })
    } else {
        Ok(())
    }
}

fn saturating_pow(q: u64, e: u64) -> u64 {
    q.checked_pow(e.min(u32::MAX as u64) as u32).unwrap_or(u64::MAX)
}

/// Conjugacy class type of `GL(2, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    Central { a: Elem },
    /// `diag(a, b)` with `a < b` by element index.
    SplitDiag { a: Elem, b: Elem },
    /// Companion matrix of the irreducible `X^2 - tX + s`.
    NonSplit { trace: Elem, norm: Elem },
    /// `[[a, a], [0, a]]`.
    Unipotent { a: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassRep {
    pub kind: ClassKind,
    /// Row-major `[a, b, c, d]`.
    pub matrix: [Elem; 4],
    pub centralizer_size: BigCount,
}

impl ConjClassRep {
    pub fn transform(&self, field: &FieldCtx) -> MoebiusTransform {
        let [a, b, c, d] = self.matrix;
        MoebiusTransform::new(field, a, b, c, d).expect("class representatives are invertible")
    }

    pub fn label(&self, field: &FieldCtx) -> String {
        let e = |x| field.format_elem(x);
        match self.kind {
            ClassKind::Central { a } => format!("central(a={})", e(a)),
            ClassKind::SplitDiag { a, b } => format!("split(a={},b={})", e(a), e(b)),
            ClassKind::NonSplit { trace, norm } => format!("nonsplit(t={},s={})", e(trace), e(norm)),
            ClassKind::Unipotent { a } => format!("unipotent(a={})", e(a)),
        }
    }
}

pub fn gl2_order(q: u64) -> BigCount {
    let q = BigCount::from(q);
    (&q * &q - 1u32) * (&q * &q - &q)
}

/// One representative per conjugacy class, in a fixed order: central, split,
/// non-split, unipotent, each in element-index order.
pub fn enumerate_classes(field: &FieldCtx) -> Vec<ConjClassRep> {
    let q = field.q() as u64;
    let big = BigCount::from;
    let mut out = Vec::new();
    for a in field.units() {
        out.push(ConjClassRep {
            kind: ClassKind::Central { a },
            matrix: [a, 0, 0, a],
            centralizer_size: big(q * (q - 1) * (q - 1) * (q + 1)),
        });
    }
    for a in field.units() {
        for b in field.units().filter(|&b| b > a) {
            out.push(ConjClassRep {
                kind: ClassKind::SplitDiag { a, b },
                matrix: [a, 0, 0, b],
                centralizer_size: big((q - 1) * (q - 1)),
            });
        }
    }
    for t in field.elements() {
        for s in field.units() {
            let has_root = field
                .elements()
                .any(|x| field.add(field.sub(field.mul(x, x), field.mul(t, x)), s) == 0);
            if !has_root {
                out.push(ConjClassRep {
                    kind: ClassKind::NonSplit { trace: t, norm: s },
                    matrix: [t, field.neg(s), 1, 0],
                    centralizer_size: big(q * q - 1),
                });
            }
        }
    }
    for a in field.units() {
        out.push(ConjClassRep {
            kind: ClassKind::Unipotent { a },
            matrix: [a, a, 0, a],
            centralizer_size: big(q * (q - 1)),
        });
    }
    out
}

/// The closed-form fixed count for a class, with the order parameter `d`
/// computed from the representative (in `F_{q^2}` for non-split classes).
pub fn closed_form_fix(field: &FieldCtx, ext: &ExtFieldCtx, n: u64, rep: &ConjClassRep) -> Result<BigCount, OracleError> {
    let q = field.q() as u64;
    Ok(match rep.kind {
        ClassKind::Central { .. } => counting::fix_central(q, n)?,
        ClassKind::SplitDiag { a, b } => {
            let d = field.mult_order(field.div(a, b))?;
            counting::fix_diagonal(q, n, d)?
        }
        ClassKind::NonSplit { trace, norm } => {
            let d = nonsplit_order(ext, trace, norm);
            counting::fix_nonsplit(q, n, d)?
        }
        ClassKind::Unipotent { .. } => counting::fix_unipotent(q, n)?,
    })
}

/// `o(alpha^(q-1))` for a root `alpha` of `X^2 - tX + s` in `F_{q^2}`.
pub fn nonsplit_order(ext: &ExtFieldCtx, trace: Elem, norm: Elem) -> u64 {
    let e = ext.ext();
    let (t, s) = (ext.embed(trace), ext.embed(norm));
    let alpha = e
        .elements()
        .find(|&x| e.add(e.sub(e.mul(x, x), e.mul(t, x)), s) == 0)
        .expect("quadratic splits in the extension");
    e.mult_order(e.div(ext.frobenius(alpha), alpha)).expect("alpha is nonzero")
}

/// All degree-`n` subfield keys, stored as sorted integer codes.
#[derive(Debug, Clone)]
pub struct KeySpace<'f> {
    field: &'f FieldCtx,
    n: usize,
    codec: KeyCodec,
    codes: Vec<u64>,
}

impl<'f> KeySpace<'f> {
    pub fn build(field: &'f FieldCtx, n: usize, budget: u64) -> Result<Self, OracleError> {
        check_budget(subfield_count(field.q() as u64, n), budget)?;
        let codec = KeyCodec::new(field, n);
        let mut codes: Vec<u64> = crate::ratmap::enumerate_subfield_keys(field, n, budget)?
            .map(|k| codec.encode(&k))
            .collect();
        codes.sort_unstable();
        Ok(KeySpace { field, n, codec, codes })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codec(&self) -> &KeyCodec {
        &self.codec
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn index_of(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok()
    }

    fn image(&self, action: &KeyAction, code: u64, buf: &mut [Vec<Elem>; 4]) -> u64 {
        let [hi, lo, oh, ol] = buf;
        self.codec.decode_dense(code, hi, lo);
        let m = action.apply_dense(self.field, hi, lo, oh, ol);
        self.codec.encode_dense(oh, ol, m)
    }

    fn buffers(&self) -> [Vec<Elem>; 4] {
        std::array::from_fn(|_| vec![0; self.n + 1])
    }

    /// Number of keys fixed by `transform`.
    pub fn count_fixed(&self, transform: &MoebiusTransform) -> u64 {
        let action = KeyAction::new(self.field, transform, self.n);
        self.codes
            .par_chunks(4096)
            .map(|chunk| {
                let mut buf = self.buffers();
                chunk.iter().filter(|&&c| self.image(&action, c, &mut buf) == c).count() as u64
            })
            .sum()
    }

    /// Orbit label of every key (labels numbered by first appearance in code order).
    pub fn orbit_labels(&self) -> Vec<u32> {
        let f = self.field;
        let gens = [
            MoebiusTransform::new(f, 1, 1, 0, 1).unwrap(),
            MoebiusTransform::new(f, 1, 0, 1, 1).unwrap(),
            MoebiusTransform::new(f, f.primitive(), 0, 0, 1).unwrap(),
        ];
        let actions: Vec<KeyAction> = gens.iter().map(|g| KeyAction::new(f, g, self.n)).collect();
        let mut labels = vec![u32::MAX; self.codes.len()];
        let mut buf = self.buffers();
        let mut stack = Vec::new();
        let mut next = 0u32;
        for seed in 0..self.codes.len() {
            if labels[seed] != u32::MAX {
                continue;
            }
            labels[seed] = next;
            stack.push(seed);
            while let Some(i) = stack.pop() {
                for a in &actions {
                    let j = self
                        .index_of(self.image(a, self.codes[i], &mut buf))
                        .expect("images of keys are keys");
                    if labels[j] == u32::MAX {
                        labels[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        labels
    }
}

/// Fixed keys of a class representative, by enumeration.
pub fn fix_count_bruteforce(field: &FieldCtx, n: usize, rep: &ConjClassRep, budget: u64) -> Result<u64, OracleError> {
    let space = KeySpace::build(field, n, budget)?;
    Ok(space.count_fixed(&rep.transform(field)))
}

fn exact_count(sum: BigRational) -> Result<BigCount, OracleError> {
    if !sum.is_integer() {
        return Err(OracleError::NonIntegral);
    }
    sum.to_integer().to_biguint().ok_or(OracleError::NonIntegral)
}

/// Burnside over conjugacy classes: `sum Fix(rep) / |centralizer|`.
pub fn burnside_count_rational(field: &FieldCtx, n: usize, budget: u64) -> Result<BigCount, OracleError> {
    let space = KeySpace::build(field, n, budget)?;
    burnside_on(&space, &enumerate_classes(field))
}

fn burnside_on(space: &KeySpace<'_>, classes: &[ConjClassRep]) -> Result<BigCount, OracleError> {
    let mut sum = BigRational::zero();
    for rep in classes {
        let fix = space.count_fixed(&rep.transform(space.field));
        sum += BigRational::new(BigInt::from(fix), BigInt::from(rep.centralizer_size.clone()));
    }
    exact_count(sum)
}

/// Every element of `PGL(2, q)` in projective canonical form.
pub fn pgl2_elements(field: &FieldCtx) -> Vec<MoebiusTransform> {
    let mut out = Vec::new();
    for a in field.elements() {
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    if let Ok(t) = MoebiusTransform::new(field, a, b, c, d) {
                        if t.entries() == [a, b, c, d] {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Burnside averaged over the whole of `PGL(2, q)`; a slow cross-check.
pub fn burnside_full_group(field: &FieldCtx, n: usize, budget: u64) -> Result<BigCount, OracleError> {
    let q = field.q() as u64;
    let group = pgl2_elements(field);
    check_budget(
        subfield_count(q, n).saturating_mul(group.len() as u64),
        budget,
    )?;
    let space = KeySpace::build(field, n, budget)?;
    let total: u64 = group.iter().map(|t| space.count_fixed(t)).sum();
    exact_count(BigRational::new(BigInt::from(total), BigInt::from(group.len())))
}

/// Orbits of subfield keys under `GL(2, q)`.
#[derive(Debug, Clone)]
pub struct RationalOrbits {
    pub labels: Vec<u32>,
    pub count: usize,
    /// Least key code in each orbit, indexed by label.
    pub representatives: Vec<u64>,
}

pub fn rational_orbits(space: &KeySpace<'_>) -> RationalOrbits {
    let labels = space.orbit_labels();
    let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut representatives = vec![u64::MAX; count];
    for (i, &l) in labels.iter().enumerate() {
        let r = &mut representatives[l as usize];
        *r = (*r).min(space.codes[i]);
    }
    RationalOrbits { labels, count, representatives }
}

/// Orbit count by explicit closure under generators of `GL(2, q)`.
pub fn orbit_count_rational(field: &FieldCtx, n: usize, budget: u64) -> Result<BigCount, OracleError> {
    let space = KeySpace::build(field, n, budget)?;
    Ok(BigCount::from(rational_orbits(&space).count))
}

/// Monic degree-`n` polynomials with zero constant term, indexed by their
/// coefficients `a_1, ..., a_{n-1}` read as base-`q` digits (`a_1` lowest).
#[derive(Debug, Clone)]
pub struct PolySpace<'f> {
    field: &'f FieldCtx,
    n: usize,
    size: u64,
}

impl<'f> PolySpace<'f> {
    pub fn new(field: &'f FieldCtx, n: usize, budget: u64) -> Result<Self, OracleError> {
        assert!(n >= 1);
        let size = saturating_pow(field.q() as u64, n as u64 - 1);
        check_budget(size, budget)?;
        Ok(PolySpace { field, n, size })
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn decode_dense(&self, mut idx: u64, out: &mut [Elem]) {
        let q = self.field.q() as u64;
        out[0] = 0;
        for c in out.iter_mut().take(self.n).skip(1) {
            *c = (idx % q) as Elem;
            idx /= q;
        }
        out[self.n] = 1;
    }

    pub fn encode_dense(&self, f: &[Elem]) -> u64 {
        let q = self.field.q() as u64;
        (1..self.n).rev().fold(0, |acc, j| acc * q + f[j] as u64)
    }

    pub fn polynomial(&self, idx: u64) -> Polynomial {
        let mut c = vec![0; self.n + 1];
        self.decode_dense(idx, &mut c);
        Polynomial::from_coeffs(c)
    }

    pub fn index_of(&self, f: &Polynomial) -> u64 {
        let mut c = f.coeffs().to_vec();
        c.resize(self.n + 1, 0);
        self.encode_dense(&c)
    }

    pub fn substitution(&self, a: Elem, b: Elem) -> AffineSubstitution {
        AffineSubstitution::new(self.field, self.n, a, b)
    }

    /// Left-normalized image of `f(aX + b)`.
    pub fn act(&self, sub: &AffineSubstitution, idx: u64, buf: &mut [Elem], out: &mut [Elem]) -> u64 {
        self.decode_dense(idx, buf);
        sub.apply(self.field, buf, out);
        let s = self.field.inv(out[self.n]).unwrap();
        for x in out.iter_mut() {
            *x = self.field.mul(*x, s);
        }
        out[0] = 0;
        self.encode_dense(out)
    }

    /// Orbit labels under the right affine action, numbered in index order.
    pub fn orbit_labels(&self) -> Vec<u32> {
        let f = self.field;
        let subs: Vec<AffineSubstitution> = f
            .units()
            .flat_map(|a| f.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.substitution(a, b))
            .collect();
        let mut labels = vec![u32::MAX; self.size as usize];
        let mut buf = vec![0; self.n + 1];
        let mut out = vec![0; self.n + 1];
        let mut next = 0;
        for seed in 0..self.size {
            if labels[seed as usize] != u32::MAX {
                continue;
            }
            for s in &subs {
                labels[self.act(s, seed, &mut buf, &mut out) as usize] = next;
            }
            next += 1;
        }
        labels
    }

    pub fn count_fixed(&self, sub: &AffineSubstitution) -> u64 {
        let mut buf = vec![0; self.n + 1];
        let mut out = vec![0; self.n + 1];
        (0..self.size).filter(|&i| self.act(sub, i, &mut buf, &mut out) == i).count() as u64
    }
}

/// Coefficients of `(aX + b)^i` for `i <= n`.
#[derive(Debug, Clone)]
pub struct AffineSubstitution {
    n: usize,
    table: Vec<Elem>,
}

impl AffineSubstitution {
    pub fn new(field: &FieldCtx, n: usize, a: Elem, b: Elem) -> Self {
        let ring = PolyRing::new(field);
        let lin = Polynomial::from_coeffs(vec![b, a]);
        let mut table = vec![0; (n + 1) * (n + 1)];
        let mut pw = Polynomial::one();
        for i in 0..=n {
            for (j, &c) in pw.coeffs().iter().enumerate() {
                table[i * (n + 1) + j] = c;
            }
            pw = ring.mul(&pw, &lin);
        }
        AffineSubstitution { n, table }
    }

    fn apply(&self, field: &FieldCtx, f: &[Elem], out: &mut [Elem]) {
        let w = self.n + 1;
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &c) in f.iter().enumerate() {
            if c != 0 {
                for (o, &t) in out.iter_mut().zip(&self.table[i * w..(i + 1) * w]) {
                    *o = field.add(*o, field.mul(c, t));
                }
            }
        }
    }
}

/// Polynomial classes by explicit orbit enumeration.
pub fn orbit_count_poly(field: &FieldCtx, n: usize, budget: u64) -> Result<BigCount, OracleError> {
    let space = PolySpace::new(field, n, budget)?;
    let labels = space.orbit_labels();
    Ok(BigCount::from(labels.iter().map(|&l| l as u64 + 1).max().unwrap_or(0)))
}

/// Fixed left-normalized polynomials of an affine class, by enumeration.
pub fn fix_affine_bruteforce(field: &FieldCtx, n: usize, class: AffineClass, budget: u64) -> Result<u64, OracleError> {
    let space = PolySpace::new(field, n, budget)?;
    let (a, b) = match class {
        AffineClass::Identity => (1, 0),
        AffineClass::Scaling { order } => {
            let q = field.q() as u64;
            (field.pow(field.primitive(), (q - 1) / order), 0)
        }
        AffineClass::Translation => (1, 1),
    };
    Ok(space.count_fixed(&space.substitution(a, b)))
}

/// Burnside over the classes of `AGL(1, q)`: identity, `aX` for each `a != 1`
/// (class size `q`), and `X + 1` (class size `q - 1`).
pub fn burnside_count_poly(field: &FieldCtx, n: usize, budget: u64) -> Result<BigCount, OracleError> {
    let space = PolySpace::new(field, n, budget)?;
    let q = field.q() as u64;
    let mut total = BigInt::from(space.count_fixed(&space.substitution(1, 0)));
    for a in field.units().filter(|&a| a != 1) {
        total += BigInt::from(q) * space.count_fixed(&space.substitution(a, 0));
    }
    total += BigInt::from(q - 1) * space.count_fixed(&space.substitution(1, 1));
    exact_count(BigRational::new(total, BigInt::from(q * (q - 1))))
}

/// Whether two-sided `PGL(2, q)` equivalence and two-sided affine equivalence
/// partition the degree-`n` polynomials identically.
pub fn lemma81_check(field: &FieldCtx, n: usize, budget: u64) -> Result<bool, OracleError> {
    let keys = KeySpace::build(field, n, budget)?;
    let rat = keys.orbit_labels();
    let polys = PolySpace::new(field, n, budget)?;
    let agl = polys.orbit_labels();
    let mut hi = vec![0; n + 1];
    let mut lo = vec![0; n + 1];
    lo[0] = 1;
    let mut forward: HashMap<u32, u32> = HashMap::new();
    let mut backward: HashMap<u32, u32> = HashMap::new();
    for idx in 0..polys.len() {
        polys.decode_dense(idx, &mut hi);
        let code = keys.codec().encode_dense(&hi, &lo, 0);
        let r = rat[keys.index_of(code).expect("polynomial keys are keys")];
        let a = agl[idx as usize];
        if *forward.entry(a).or_insert(r) != r || *backward.entry(r).or_insert(a) != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct enumerations behind the appendix counts.
pub mod appendix {
    use super::*;

    fn monics<'a>(ring: &PolyRing<'a>, deg: usize) -> Vec<Polynomial> {
        ring.monic_of_degree(deg).collect()
    }

    pub fn alpha(field: &FieldCtx, m: usize, n: usize) -> u64 {
        let ring = PolyRing::new(field);
        let gs = monics(&ring, n);
        monics(&ring, m)
            .iter()
            .map(|f| gs.iter().filter(|g| ring.is_coprime(f, g)).count() as u64)
            .sum()
    }

    pub fn alpha_total(field: &FieldCtx, n: usize) -> u64 {
        (0..n).map(|m| alpha(field, m, n)).sum()
    }

    pub fn beta(field: &FieldCtx, m: usize, n: usize) -> u64 {
        let ring = PolyRing::new(field);
        let gs = monics(&ring, n);
        monics(&ring, m)
            .iter()
            .filter(|f| f.coeff(0) != 0)
            .map(|f| gs.iter().filter(|g| ring.is_coprime(f, g)).count() as u64)
            .sum()
    }

    /// Reduced fractions `P/Q`, `Q` monic, of degree exactly `n`.
    pub fn rational_count(field: &FieldCtx, n: usize) -> u64 {
        let ring = PolyRing::new(field);
        let dens: Vec<Polynomial> = (0..=n).flat_map(|d| ring.monic_of_degree(d)).collect();
        let nums: Vec<Polynomial> = ring.all_up_to_degree(n).filter(|p| !p.is_zero()).collect();
        let mut count = 0;
        for den in &dens {
            for num in &nums {
                let deg = num.degree().unwrap().max(den.degree().unwrap());
                if deg == n && ring.is_coprime(num, den) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Monic self-dual polynomials of degree `i` over `F_{q^2}`.
    pub fn self_dual_monics(ext: &ExtFieldCtx, i: usize) -> Vec<Polynomial> {
        let ring = PolyRing::new(ext.ext());
        ring.monic_of_degree(i)
            .filter(|g| self_dual_scalar(ext, g).expect("nonzero").is_some())
            .collect()
    }

    pub fn lambda(ext: &ExtFieldCtx, i: usize) -> u64 {
        self_dual_monics(ext, i).len() as u64
    }

    pub fn theta(ext: &ExtFieldCtx, i: usize) -> u64 {
        let ring = PolyRing::new(ext.ext());
        ring.monic_of_degree(i)
            .filter(|g| ring.is_coprime(g, &tilde(ext, g).expect("nonzero")))
            .count() as u64
    }

    pub fn gamma(ext: &ExtFieldCtx, i: usize, j: usize) -> u64 {
        let ring = PolyRing::new(ext.ext());
        let a = self_dual_monics(ext, i);
        let b = self_dual_monics(ext, j);
        a.iter()
            .map(|f| b.iter().filter(|g| ring.is_coprime(f, g)).count() as u64)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub q: u64,
    pub n: u64,
    #[serde(with = "crate::counting::count_string")]
    pub expected: BigCount,
    #[serde(with = "crate::counting::count_string")]
    pub actual: BigCount,
    pub pass: bool,
    pub elapsed_ms: u64,
}

impl Check {
    fn new(name: impl Into<String>, q: u64, n: u64, expected: BigCount, actual: BigCount, start: Instant) -> Self {
        let pass = expected == actual;
        Check {
            name: name.into(),
            q,
            n,
            expected,
            actual,
            pass,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub failed: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VerifyKind {
    FixFormulas,
    FrakN,
    FrakM,
    AppendixLemmas,
}

impl VerifyKind {
    pub const ALL: [VerifyKind; 4] = [
        VerifyKind::FixFormulas,
        VerifyKind::FrakN,
        VerifyKind::FrakM,
        VerifyKind::AppendixLemmas,
    ];
}

/// Outcome of one `(q, n, kind)` cell.
enum CellResult {
    Checks(Vec<Check>),
    Skipped,
}

fn big(x: u64) -> BigCount {
    BigCount::from(x)
}

fn run_cell(q: u64, n: u64, kind: VerifyKind, budget: u64) -> Result<CellResult, OracleError> {
    let field = FieldCtx::of_order(q)?;
    let nu = n as usize;
    let over = |e: OracleError| match e {
        OracleError::Budget { .. } | OracleError::Rat(RatError::BudgetExceeded { .. }) => Ok(CellResult::Skipped),
        other => Err(other),
    };
    let mut checks = Vec::new();
    match kind {
        VerifyKind::FixFormulas => {
            let space = match KeySpace::build(&field, nu, budget) {
                Ok(s) => s,
                Err(e) => return over(e),
            };
            let ext = ExtFieldCtx::new(&field)?;
            let classes = enumerate_classes(&field);
            let results: Vec<Result<Check, OracleError>> = classes
                .par_iter()
                .map(|rep| {
                    let start = Instant::now();
                    let expected = closed_form_fix(&field, &ext, n, rep)?;
                    let actual = big(space.count_fixed(&rep.transform(&field)));
                    Ok(Check::new(format!("fix/{}", rep.label(&field)), q, n, expected, actual, start))
                })
                .collect();
            for r in results {
                checks.push(r?);
            }
        }
        VerifyKind::FrakN => {
            let space = match KeySpace::build(&field, nu, budget) {
                Ok(s) => s,
                Err(e) => return over(e),
            };
            let expected = counting::frak_n(q, n)?;
            let start = Instant::now();
            let burnside = burnside_on(&space, &enumerate_classes(&field))?;
            checks.push(Check::new("frakN/burnside", q, n, expected.clone(), burnside, start));
            let start = Instant::now();
            let orbits = big(rational_orbits(&space).count as u64);
            checks.push(Check::new("frakN/orbits", q, n, expected, orbits, start));
        }
        VerifyKind::FrakM => {
            if PolySpace::new(&field, nu, budget).is_err() {
                return Ok(CellResult::Skipped);
            }
            let expected = counting::frak_m(q, n)?;
            let start = Instant::now();
            let orbits = orbit_count_poly(&field, nu, budget)?;
            checks.push(Check::new("frakM/orbits", q, n, expected.clone(), orbits, start));
            let start = Instant::now();
            let burnside = burnside_count_poly(&field, nu, budget)?;
            checks.push(Check::new("frakM/burnside", q, n, expected, burnside, start));
            let p = counting::characteristic(q)?;
            let mut classes = vec![AffineClass::Identity, AffineClass::Translation];
            classes.extend(
                crate::numtheory::divisors(q - 1)
                    .into_iter()
                    .filter(|&d| d > 1)
                    .map(|order| AffineClass::Scaling { order }),
            );
            for class in classes {
                let start = Instant::now();
                let expected = counting::fix_affine(q, n, class)?;
                let actual = big(fix_affine_bruteforce(&field, nu, class, budget)?);
                let name = match class {
                    AffineClass::Identity => "fixAffine/identity".to_string(),
                    AffineClass::Scaling { order } => format!("fixAffine/scaling(d={order})"),
                    AffineClass::Translation => format!("fixAffine/translation(p={p})"),
                };
                checks.push(Check::new(name, q, n, expected, actual, start));
            }
        }
        VerifyKind::AppendixLemmas => {
            // the largest enumeration is the rational-count double loop, about q^(2n+1)
            if saturating_pow(q, 2 * n + 1) > budget || q * q > crate::gf::DEFAULT_SIZE_BOUND {
                return Ok(CellResult::Skipped);
            }
            let ext = ExtFieldCtx::new(&field)?;
            let mut push = |name: String, expected: BigCount, actual: u64, start: Instant| {
                checks.push(Check::new(name, q, n, expected, big(actual), start));
            };
            for m in 0..=n {
                let s = Instant::now();
                push(format!("alpha(m={m})"), counting::alpha(m, n, q)?, appendix::alpha(&field, m as usize, nu), s);
            }
            let s = Instant::now();
            push("alphaTotal".into(), counting::alpha_total(n, q)?, appendix::alpha_total(&field, nu), s);
            for m in 0..=n + 1 {
                let s = Instant::now();
                push(format!("beta(m={m})"), counting::beta(m, n, q)?, appendix::beta(&field, m as usize, nu), s);
            }
            let s = Instant::now();
            push("rationalCount".into(), counting::rational_count(n, q)?, appendix::rational_count(&field, nu), s);
            let s = Instant::now();
            push("lambda".into(), counting::lambda_sd(n, q)?, appendix::lambda(&ext, nu), s);
            let s = Instant::now();
            push("theta".into(), counting::theta_coprime(n, q)?, appendix::theta(&ext, nu), s);
            for i in 0..=n {
                let s = Instant::now();
                push(format!("gamma(i={i})"), counting::gamma_sd(i, n, q)?, appendix::gamma(&ext, i as usize, nu), s);
            }
        }
    }
    Ok(CellResult::Checks(checks))
}

/// Runs every requested kind on every `(q, n)` cell. Cells run in parallel;
/// the report lists checks in `(q, n, kind)` order regardless of scheduling.
/// Cells beyond `budget` are counted in `summary.skipped` and omitted from
/// `checks`.
pub fn verify_grid(q_list: &[u64], n_list: &[u64], kinds: &[VerifyKind], budget: u64) -> Result<VerificationReport, OracleError> {
    let cells: Vec<(u64, u64, VerifyKind)> = q_list
        .iter()
        .flat_map(|&q| n_list.iter().flat_map(move |&n| kinds.iter().map(move |&k| (q, n, k))))
        .collect();
    let results: Vec<Result<CellResult, OracleError>> =
        cells.par_iter().map(|&(q, n, k)| run_cell(q, n, k, budget)).collect();
    let mut report = VerificationReport::default();
    for r in results {
        match r? {
            CellResult::Checks(cs) => report.checks.extend(cs),
            CellResult::Skipped => report.summary.skipped += 1,
        }
    }
    report.summary.total = report.checks.len() as u64;
    report.summary.failed = report.checks.iter().filter(|c| !c.pass).count() as u64;
    Ok(report)
}

/// Class-equation sum `sum |GL| / |centralizer|`.
pub fn class_equation_sum(field: &FieldCtx) -> BigCount {
    let order = gl2_order(field.q() as u64);
    enumerate_classes(field)
        .iter()
        .map(|c| &order / &c.centralizer_size)
        .sum()
}

/// `true` when every class size divides evenly, a cheap consistency check.
pub fn centralizers_divide(field: &FieldCtx) -> bool {
    let order = gl2_order(field.q() as u64);
    enumerate_classes(field)
        .iter()
        .all(|c| (&order % &c.centralizer_size).is_zero())
}
