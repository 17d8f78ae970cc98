//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Operations that need field arithmetic live on [`PolyRing`], a borrowed view
//! of the coefficient field. The coefficientwise Frobenius, the reversal-conjugate
//! `tilde` and self-duality are defined over a quadratic extension and take an
//! [`ExtFieldCtx`].

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::gf::{Elem, ExtFieldCtx, FieldCtx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("difference order {i} outside 0..={max}")]
    DeltaOrder { i: u32, max: u32 },
}

/// Polynomial with coefficients lowest degree first and no trailing zeros.
///
/// Serializes as its coefficient array.
#[derive(Clone, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct Polynomial {
    coeffs: Vec<Elem>,
}

impl From<Vec<Elem>> for Polynomial {
    fn from(coeffs: Vec<Elem>) -> Self {
        Self::from_coeffs(coeffs)
    }
}

impl From<Polynomial> for Vec<Elem> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * X^deg`.
    pub fn monomial(c: Elem, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    /// Builds from coefficients (lowest first), trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(1)
    }

    /// Compares by coefficients from the top degree down, then by degree.
    pub fn cmp_high_first(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Polynomial arithmetic over a borrowed coefficient field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    field: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(field: &'a FieldCtx) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.field
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let n = f.coeffs.len().max(g.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.add(f.coeff(i), g.coeff(i))).collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let n = f.coeffs.len().max(g.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.sub(f.coeff(i), g.coeff(i))).collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(f.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, f: &Polynomial, c: Elem) -> Polynomial {
        Polynomial::from_coeffs(f.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, &a) in f.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Polynomial::from_coeffs(out)
    }

    pub fn pow(&self, f: &Polynomial, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::one(), |acc, _| self.mul(&acc, f))
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn div_rem(&self, f: &Polynomial, g: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let dg = g.degree()?;
        let inv_lead = self.field.inv(g.lead()?).ok()?;
        let mut rem = f.coeffs.clone();
        if rem.len() <= dg {
            return Some((Polynomial::zero(), f.clone()));
        }
        let mut quot = vec![0; rem.len() - dg];
        for deg in (dg..rem.len()).rev() {
            let c = self.field.mul(rem[deg], inv_lead);
            if c == 0 {
                continue;
            }
            quot[deg - dg] = c;
            for (i, &b) in g.coeffs.iter().enumerate() {
                let idx = deg - dg + i;
                rem[idx] = self.field.sub(rem[idx], self.field.mul(c, b));
            }
        }
        Some((Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
        self.div_rem(f, g).map(|(_, r)| r)
    }

    /// Scales a nonzero polynomial to leading coefficient one.
    pub fn monic(&self, f: &Polynomial) -> Polynomial {
        match f.lead() {
            None => Polynomial::zero(),
            Some(c) => self.scale(f, self.field.inv(c).expect("nonzero lead")),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
        if f.is_zero() && g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        Ok(self.monic(&a))
    }

    pub fn is_coprime(&self, f: &Polynomial, g: &Polynomial) -> bool {
        matches!(self.gcd(f, g), Ok(d) if d.degree() == Some(0))
    }

    /// `f(g(X))` by Horner accumulation.
    pub fn compose(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        f.coeffs.iter().rev().fold(Polynomial::zero(), |acc, &c| {
            self.add(&self.mul(&acc, g), &Polynomial::constant(c))
        })
    }

    pub fn eval(&self, f: &Polynomial, x: Elem) -> Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// The difference operator `f(X+1) - f(X)`.
    pub fn delta(&self, f: &Polynomial) -> Polynomial {
        let shifted = self.compose(f, &Polynomial::from_coeffs(vec![1, 1]));
        self.sub(&shifted, f)
    }

    pub fn delta_pow(&self, f: &Polynomial, i: u32) -> Polynomial {
        (0..i).fold(f.clone(), |acc, _| self.delta(&acc))
    }

    /// Whether `delta^i f = 0`, for `0 <= i <= p`.
    pub fn delta_kernel_basis_check(&self, f: &Polynomial, i: u32) -> Result<bool, PolyError> {
        let p = self.field.p();
        if i > p {
            return Err(PolyError::DeltaOrder { i, max: p });
        }
        Ok(self.delta_pow(f, i).is_zero())
    }

    /// `X^p - X`.
    pub fn artin_schreier(&self) -> Polynomial {
        let p = self.field.p() as usize;
        let mut c = vec![0; p + 1];
        c[p] = 1;
        c[1] = self.field.neg(1);
        Polynomial::from_coeffs(c)
    }

    /// Components `g_0, ..., g_{p-1}` with `f = sum_j g_j(X^p - X) X^j`,
    /// read off from the `(X^p - X)`-adic expansion of `f`.
    pub fn delta_decompose(&self, f: &Polynomial) -> Vec<Polynomial> {
        let p = self.field.p() as usize;
        let h = self.artin_schreier();
        let mut digits: Vec<Vec<Elem>> = vec![Vec::new(); p];
        let mut cur = f.clone();
        while !cur.is_zero() {
            let (quot, rem) = self.div_rem(&cur, &h).expect("X^p - X is nonzero");
            for (j, g) in digits.iter_mut().enumerate() {
                g.push(rem.coeff(j));
            }
            cur = quot;
        }
        digits.into_iter().map(Polynomial::from_coeffs).collect()
    }

    /// All monic polynomials of degree `deg`, lower coefficients in base-`q`
    /// counting order (constant term varying fastest).
    pub fn monic_of_degree(&self, deg: usize) -> impl Iterator<Item = Polynomial> + 'a {
        let q = self.field.q() as u64;
        let total = q.pow(deg as u32);
        (0..total).map(move |mut t| {
            let mut c = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                c.push((t % q) as Elem);
                t /= q;
            }
            c.push(1);
            Polynomial { coeffs: c }
        })
    }

    /// All polynomials of degree at most `deg`, including zero.
    pub fn all_up_to_degree(&self, deg: usize) -> impl Iterator<Item = Polynomial> + 'a {
        let q = self.field.q() as u64;
        let total = q.pow(deg as u32 + 1);
        (0..total).map(move |mut t| {
            let mut c = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                c.push((t % q) as Elem);
                t /= q;
            }
            Polynomial::from_coeffs(c)
        })
    }

    /// Renders with variable `X` and `^` exponents, highest degree first.
    pub fn format(&self, f: &Polynomial) -> String {
        format_with(self.field, f, "X")
    }
}

pub(crate) fn format_with(field: &FieldCtx, f: &Polynomial, var: &str) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let cs = field.format_elem(c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (i, c) {
            (0, _) => cs,
            (_, 1) => mono,
            _ => format!("{cs}{mono}"),
        });
    }
    terms.join("+")
}

/// Coefficientwise q-power Frobenius on a polynomial over GF(q^2).
pub fn conj(ext: &ExtFieldCtx, g: &Polynomial) -> Polynomial {
    Polynomial::from_coeffs(g.coeffs.iter().map(|&c| ext.frobenius(c)).collect())
}

/// `X^deg(g) * conj(g)(1/X)`: reverse the coefficients and conjugate them.
pub fn tilde(ext: &ExtFieldCtx, g: &Polynomial) -> Result<Polynomial, PolyError> {
    if g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let rev = g.coeffs.iter().rev().map(|&c| ext.frobenius(c)).collect();
    Ok(Polynomial::from_coeffs(rev))
}

/// The scalar `c` with `tilde(g) = c * g`, when `g` is self-dual.
pub fn self_dual_scalar(ext: &ExtFieldCtx, g: &Polynomial) -> Result<Option<Elem>, PolyError> {
    let t = tilde(ext, g)?;
    if t.degree() != g.degree() {
        return Ok(None);
    }
    let f = ext.ext();
    let c = f.div(t.lead().unwrap(), g.lead().unwrap());
    let ring = PolyRing::new(f);
    Ok((ring.scale(g, c) == t).then_some(c))
}
