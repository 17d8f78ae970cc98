//! Finite fields GF(p^k) as dense element indices.
//!
//! An element is an integer in `0..q` whose base-`p` digits are its coefficients
//! in the polynomial basis `1, t, t^2, ...` (constant term in the lowest digit),
//! where `t` is a root of the field's defining modulus. Index 0 is zero and
//! index 1 is one. Multiplication goes through log/antilog tables up to
//! `q = 2^16` and falls back to polynomial reduction above that.

use std::fmt;

use thiserror::Error;

use crate::numtheory;

/// A field element, encoded as a dense index into `0..q`.
pub type Elem = u32;

/// Largest field built unless the caller raises the bound.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 20;

const LOG_TABLE_LIMIT: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u64 = 1 << 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{k} exceeds the size bound {bound}")]
    TooLarge { p: u64, k: u32, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero has no multiplicative order or inverse")]
    ZeroElement,
}

/// Concrete field GF(p^k) with precomputed arithmetic tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    /// Monic irreducible over F_p, constant coefficient first, length `k + 1`.
    modulus: Vec<u32>,
    primitive: Elem,
    /// Prime factors of `q - 1`, used for order computations.
    order_factors: Vec<u64>,
    add_table: Option<Vec<Elem>>,
    neg_table: Vec<Elem>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldCtx {
    /// Builds GF(p^k) with the default size bound.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, k, DEFAULT_SIZE_BOUND)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, k) = numtheory::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn with_bound(p: u64, k: u32, bound: u64) -> Result<Self, FieldError> {
        if !numtheory::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= bound && q <= u32::MAX as u64)
            .ok_or(FieldError::TooLarge { p, k, bound })?;
        let modulus = least_irreducible(p as u32, k);
        let mut field = FieldCtx {
            p: p as u32,
            k,
            q: q as u32,
            modulus,
            primitive: 1,
            order_factors: numtheory::factorize(q - 1).into_iter().map(|(r, _)| r).collect(),
            add_table: None,
            neg_table: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.neg_table = (0..q as u32).map(|a| field.neg_slow(a)).collect();
        if q <= ADD_TABLE_LIMIT {
            let mut t = Vec::with_capacity((q * q) as usize);
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    t.push(field.add_slow(a, b));
                }
            }
            field.add_table = Some(t);
        }
        field.primitive = (1..q as u32)
            .find(|&g| field.order_with(g, |x, y| field.mul_slow(x, y)) == q - 1)
            .expect("multiplicative group of a finite field is cyclic");
        if q <= LOG_TABLE_LIMIT {
            let m = (q - 1) as usize;
            let mut exp = vec![0; 2 * m];
            let mut log = vec![0; q as usize];
            let mut x: Elem = 1;
            for i in 0..m {
                exp[i] = x;
                log[x as usize] = i as u32;
                x = field.mul_slow(x, field.primitive);
            }
            for i in m..2 * m {
                exp[i] = exp[i - m];
            }
            field.exp = exp;
            field.log = log;
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining modulus over F_p, constant coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group (least index).
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// Every element in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.q
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    /// Base-`p` digits (coefficients over F_p), constant coefficient first.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut a = a;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.log.is_empty() {
            return self.mul_slow(a, b);
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroElement);
        }
        if self.log.is_empty() {
            return Ok(self.pow(a, self.q as u64 - 2));
        }
        let m = self.q - 1;
        Ok(self.exp[((m - self.log[a as usize]) % m) as usize])
    }

    /// Division by a nonzero element. Panics on a zero divisor.
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b).expect("division by zero field element"))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.log.is_empty() {
            let m = (self.q - 1) as u64;
            let l = (self.log[a as usize] as u64 * (e % m)) % m;
            return self.exp[l as usize];
        }
        let (mut base, mut e, mut acc) = (a, e, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Least `d >= 1` with `a^d = 1`.
    pub fn mult_order(&self, a: Elem) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.order_with(a, |x, y| self.mul(x, y)))
    }

    /// Whether `a` is a nonzero square.
    pub fn is_square(&self, a: Elem) -> bool {
        if a == 0 {
            return false;
        }
        if self.p == 2 {
            return true;
        }
        self.pow(a, (self.q as u64 - 1) / 2) == 1
    }

    /// Human-readable element: an integer for prime fields, a polynomial in `t` otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let digits = self.digits(a);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let coef = if d == 1 && i > 0 { String::new() } else { d.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{i}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn order_with(&self, a: Elem, mul: impl Fn(Elem, Elem) -> Elem) -> u64 {
        let pow = |x: Elem, mut e: u64| {
            let (mut base, mut acc) = (x, 1);
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(acc, base);
                }
                base = mul(base, base);
                e >>= 1;
            }
            acc
        };
        let mut order = self.q as u64 - 1;
        for &r in &self.order_factors {
            while order % r == 0 && pow(a, order / r) == 1 {
                order /= r;
            }
        }
        order
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as Elem;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[deg] = 0;
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.from_digits(&digits)
    }
}

/// Lexicographically least monic irreducible of degree `k` over F_p, comparing
/// coefficients from the constant term upward.
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for t in 0..total {
        // constant term is the most significant digit of `t`
        let mut cand = vec![0u32; k as usize + 1];
        let mut x = t;
        for i in (0..k as usize).rev() {
            cand[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        cand[k as usize] = 1;
        if is_irreducible_fp(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible_fp(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for t in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut x = t;
            for c in g.iter_mut().take(d) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            g[d] = 1;
            if fp_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn fp_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    for deg in (dg..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let idx = deg - dg + i;
            r[idx] = (r[idx] + (p - c) * gc as u64) % p;
        }
    }
    r[..dg].iter().all(|&c| c == 0)
}

/// GF(q) together with its quadratic extension GF(q^2), an embedding of the
/// base field and the q-power Frobenius of the extension.
#[derive(Debug, Clone)]
pub struct ExtFieldCtx {
    base: FieldCtx,
    ext: FieldCtx,
    embed: Vec<Elem>,
    frobenius: Vec<Elem>,
    project: Vec<Option<Elem>>,
}

impl ExtFieldCtx {
    pub fn new(base: &FieldCtx) -> Result<Self, FieldError> {
        Self::with_bound(base, DEFAULT_SIZE_BOUND)
    }

    pub fn with_bound(base: &FieldCtx, bound: u64) -> Result<Self, FieldError> {
        let ext = FieldCtx::with_bound(base.p as u64, 2 * base.k, bound)?;
        // A root of the base modulus in the extension fixes the embedding t -> root.
        let root = ext
            .elements()
            .find(|&r| {
                let mut acc = 0;
                for &c in base.modulus.iter().rev() {
                    acc = ext.add(ext.mul(acc, r), c);
                }
                acc == 0
            })
            .expect("base modulus splits in the extension");
        let embed: Vec<Elem> = base
            .elements()
            .map(|a| {
                let mut acc = 0;
                for &c in base.digits(a).iter().rev() {
                    acc = ext.add(ext.mul(acc, root), c);
                }
                acc
            })
            .collect();
        let mut project = vec![None; ext.q as usize];
        for (a, &x) in embed.iter().enumerate() {
            project[x as usize] = Some(a as Elem);
        }
        let frobenius = ext
            .elements()
            .map(|x| (0..base.k).fold(x, |y, _| ext.pow(y, ext.p as u64)))
            .collect();
        Ok(ExtFieldCtx {
            base: base.clone(),
            ext,
            embed,
            frobenius,
            project,
        })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn ext(&self) -> &FieldCtx {
        &self.ext
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a as usize]
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn project(&self, x: Elem) -> Option<Elem> {
        self.project[x as usize]
    }

    /// `x -> x^q`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.frobenius[x as usize]
    }

    /// `x * x^q`, which lies in the base field.
    pub fn norm(&self, x: Elem) -> Elem {
        let n = self.ext.mul(x, self.frobenius(x));
        self.project(n).expect("norm lies in the base field")
    }

    /// The norm-one subgroup `{x : x^(q+1) = 1}` in index order.
    pub fn mu_q_plus_1(&self) -> Vec<Elem> {
        let e = self.base.q as u64 + 1;
        self.ext.units().filter(|&x| self.ext.pow(x, e) == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldCtx) {
        for a in f.elements() {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (13, 1)] {
            check_axioms(&FieldCtx::new(p, k).unwrap());
        }
    }

    #[test]
    fn moduli() {
        assert_eq!(FieldCtx::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // comparing from the constant term up, X^3 + X^2 + 1 precedes X^3 + X + 1
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        // over F_3 the least is X^2 + 1
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldCtx::new(5, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(FieldCtx::new(2, 21), Err(FieldError::TooLarge { .. })));
        assert!(FieldCtx::with_bound(2, 21, 1 << 21).is_ok());
        assert_eq!(FieldCtx::of_order(6).unwrap_err(), FieldError::NotPrimePower(6));
    }

    #[test]
    fn orders() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.mult_order(2).unwrap(), 4);
        assert_eq!(f5.mult_order(1).unwrap(), 1);
        assert_eq!(f5.mult_order(0), Err(FieldError::ZeroElement));
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(f7.mult_order(6).unwrap(), 2);
    }

    #[test]
    fn order_distribution_matches_totient() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64] {
            let f = FieldCtx::of_order(q).unwrap();
            let mut hist = std::collections::BTreeMap::new();
            for a in f.units() {
                let d = f.mult_order(a).unwrap();
                assert_eq!((q - 1) % d, 0);
                *hist.entry(d).or_insert(0u64) += 1;
            }
            for d in numtheory::divisors(q - 1) {
                assert_eq!(hist.get(&d).copied().unwrap_or(0), numtheory::totient(d));
            }
        }
    }

    #[test]
    fn slow_path_agrees_with_tables() {
        let big = FieldCtx::with_bound(2, 17, 1 << 17).unwrap();
        assert!(big.log.is_empty());
        let g = big.primitive();
        assert_eq!(big.mult_order(g).unwrap(), (1 << 17) - 1);
        for a in (1..big.q()).step_by(7919) {
            let b = big.inv(a).unwrap();
            assert_eq!(big.mul(a, b), 1);
        }
    }

    #[test]
    fn extension_invariants() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let base = FieldCtx::of_order(q).unwrap();
            let ext = ExtFieldCtx::new(&base).unwrap();
            let e = ext.ext();
            assert_eq!(e.q() as u64, q * q);
            for a in base.elements() {
                for b in base.elements() {
                    assert_eq!(ext.embed(base.add(a, b)), e.add(ext.embed(a), ext.embed(b)));
                    assert_eq!(ext.embed(base.mul(a, b)), e.mul(ext.embed(a), ext.embed(b)));
                }
            }
            let mut fixed = 0;
            for x in e.elements() {
                assert_eq!(ext.frobenius(ext.frobenius(x)), x);
                if ext.frobenius(x) == x {
                    fixed += 1;
                    assert!(ext.project(x).is_some());
                } else {
                    assert!(ext.project(x).is_none());
                }
                ext.norm(x);
            }
            assert_eq!(fixed, q);
            assert_eq!(ext.mu_q_plus_1().len() as u64, q + 1);
        }
    }

    #[test]
    fn gf16_frobenius_is_fourth_power() {
        let base = FieldCtx::new(2, 2).unwrap();
        let ext = ExtFieldCtx::new(&base).unwrap();
        for x in ext.ext().elements() {
            assert_eq!(ext.frobenius(x), ext.ext().pow(x, 4));
        }
    }

    #[test]
    fn squares() {
        let f = FieldCtx::new(7, 1).unwrap();
        let sq: Vec<_> = f.units().filter(|&a| f.is_square(a)).collect();
        assert_eq!(sq, vec![1, 2, 4]);
    }

    #[test]
    fn element_formatting() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.format_elem(0), "0");
        assert_eq!(f.format_elem(1), "1");
        assert_eq!(f.format_elem(3), "t");
        assert_eq!(f.format_elem(7), "2t+1");
    }
}
