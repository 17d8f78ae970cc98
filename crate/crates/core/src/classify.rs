//! Canonical representatives of polynomial classes under two-sided affine
//! composition, the representative families for degrees 1 to 5, and the two
//! degree-2 rational classes.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{self, BigCount, CountError};
use crate::gf::{Elem, FieldCtx};
use crate::oracle::{KeySpace, OracleError, PolySpace};
use crate::polyring::{PolyRing, Polynomial};
use crate::ratmap::{subfield_key, KeyCodec, RationalMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("polynomial is constant")]
    Constant,
    #[error("no representative table for degree {0}")]
    NoTable(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// `X -> aX + b` with `a != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub a: Elem,
    pub b: Elem,
}

impl AffineMap {
    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial::from_coeffs(vec![self.b, self.a])
    }

    pub fn all(field: &FieldCtx) -> impl Iterator<Item = AffineMap> + '_ {
        field.units().flat_map(move |a| field.elements().map(move |b| AffineMap { a, b }))
    }
}

/// The unique monic, zero-constant-term polynomial left-equivalent to `f`.
pub fn left_normalize(ring: &PolyRing<'_>, f: &Polynomial) -> Result<Polynomial, ClassifyError> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(ClassifyError::Constant);
    }
    let s = ring.field().inv(f.lead().unwrap()).unwrap();
    let mut c = ring.scale(f, s).coeffs().to_vec();
    c[0] = 0;
    Ok(Polynomial::from_coeffs(c))
}

/// Least left-normalized polynomial in the class of `f`, comparing
/// coefficients from the top degree down.
pub fn canonical_poly(field: &FieldCtx, f: &Polynomial) -> Result<Polynomial, ClassifyError> {
    let ring = PolyRing::new(field);
    let f = left_normalize(&ring, f)?;
    let mut best: Option<Polynomial> = None;
    for m in AffineMap::all(field) {
        let g = left_normalize(&ring, &ring.compose(&f, &m.as_polynomial()))?;
        if best.as_ref().is_none_or(|b| g.cmp_high_first(b) == Ordering::Less) {
            best = Some(g);
        }
    }
    Ok(best.unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyClassRep {
    /// Coefficients, constant term first.
    pub canon: Polynomial,
    pub orbit_size: u64,
    pub family_tag: Option<String>,
}

/// Every class of degree-`n` polynomials, sorted by canonical form.
pub fn classify_all(field: &FieldCtx, n: usize, budget: u64) -> Result<Vec<PolyClassRep>, ClassifyError> {
    let space = PolySpace::new(field, n, budget)?;
    let subs: Vec<_> = AffineMap::all(field).map(|m| space.substitution(m.a, m.b)).collect();
    let mut seen = vec![false; space.len() as usize];
    let mut buf = vec![0; n + 1];
    let mut out = vec![0; n + 1];
    let mut reps = Vec::new();
    for seed in 0..space.len() {
        if seen[seed as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = subs.iter().map(|s| space.act(s, seed, &mut buf, &mut out)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &i in &orbit {
            seen[i as usize] = true;
        }
        let canon = orbit
            .iter()
            .map(|&i| space.polynomial(i))
            .min_by(|a, b| a.cmp_high_first(b))
            .unwrap();
        reps.push(PolyClassRep {
            canon,
            orbit_size: orbit.len() as u64,
            family_tag: None,
        });
    }
    reps.sort_by(|a, b| a.canon.cmp_high_first(&b.canon));
    if let Ok(row) = table_row(field, n) {
        let mut tags = HashMap::new();
        for fam in &row.families {
            for m in &fam.members {
                tags.insert(canonical_poly(field, m)?, fam.tag.clone());
            }
        }
        for r in &mut reps {
            r.family_tag = tags.get(&r.canon).cloned();
        }
    }
    Ok(reps)
}

/// Least-index representatives of the cosets of the `i`-th powers in `F_q^*`.
pub fn coset_reps(field: &FieldCtx, i: u64) -> Vec<Elem> {
    let powers: HashSet<Elem> = field.units().map(|x| field.pow(x, i)).collect();
    let mut covered = HashSet::new();
    let mut reps = Vec::new();
    for x in field.units() {
        if covered.contains(&x) {
            continue;
        }
        reps.push(x);
        covered.extend(powers.iter().map(|&h| field.mul(x, h)));
    }
    reps
}

/// One row of a representative table: the families listed for the residue
/// class of `q`, with the count each row of the table claims.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: String,
    pub families: Vec<Family>,
}

#[derive(Debug, Clone)]
pub struct Family {
    pub tag: String,
    pub expected: u64,
    pub members: Vec<Polynomial>,
}

// sparse polynomial from (degree, coefficient) pairs
fn sparse(terms: &[(usize, Elem)]) -> Polynomial {
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut c = vec![0; deg + 1];
    for &(d, x) in terms {
        c[d] = x;
    }
    Polynomial::from_coeffs(c)
}

struct RowBuilder {
    n: usize,
    families: Vec<Family>,
}

impl RowBuilder {
    fn push(mut self, tag: &str, expected: u64, members: Vec<Polynomial>) -> Self {
        self.families.push(Family {
            tag: tag.to_string(),
            expected,
            members,
        });
        self
    }

    /// `X^n + sum terms`, one member per parameter value.
    fn one(self, tag: &str, expected: u64, terms: &[(usize, Elem)]) -> Self {
        let mut t = terms.to_vec();
        t.push((self.n, 1));
        let p = sparse(&t);
        self.push(tag, expected, vec![p])
    }

    fn over(self, tag: &str, expected: u64, params: &[Elem], build: impl Fn(Elem) -> Vec<(usize, Elem)>) -> Self {
        let n = self.n;
        let members = params
            .iter()
            .map(|&a| {
                let mut t = build(a);
                t.push((n, 1));
                sparse(&t)
            })
            .collect();
        self.push(tag, expected, members)
    }

    fn over2(
        self,
        tag: &str,
        expected: u64,
        first: &[Elem],
        second: &[Elem],
        build: impl Fn(Elem, Elem) -> Vec<(usize, Elem)>,
    ) -> Self {
        let n = self.n;
        let members = first
            .iter()
            .flat_map(|&a| second.iter().map(move |&b| (a, b)))
            .map(|(a, b)| {
                let mut t = build(a, b);
                t.push((n, 1));
                sparse(&t)
            })
            .collect();
        self.push(tag, expected, members)
    }
}

/// The table row matching `q` for degree `n`.
pub fn table_row(field: &FieldCtx, n: usize) -> Result<TableRow, ClassifyError> {
    let q = field.q() as u64;
    let p = field.p() as u64;
    let all: Vec<Elem> = field.elements().collect();
    let units: Vec<Elem> = field.units().collect();
    let c2 = coset_reps(field, 2);
    let c3 = coset_reps(field, 3);
    let c4 = coset_reps(field, 4);
    let b = RowBuilder { n, families: Vec::new() };
    let qq = q;
    let (label, b) = match n {
        1 => ("all q".to_string(), b.one("X", 1, &[])),
        2 if q % 2 == 0 => ("q even".into(), b.one("X^2+X", 1, &[(1, 1)]).one("X^2", 1, &[])),
        2 => ("q odd".into(), b.one("X^2", 1, &[])),
        3 if p == 2 => ("p=2".into(), b.one("X^3+X", 1, &[(1, 1)]).one("X^3", 1, &[])),
        3 if p == 3 => (
            "p=3".into(),
            b.one("X^3+X^2", 1, &[(2, 1)])
                .over("X^3+aX, a in C2", 2, &c2, |a| vec![(1, a)])
                .one("X^3", 1, &[]),
        ),
        3 => (
            "p>3".into(),
            b.over("X^3+aX, a in C2", 2, &c2, |a| vec![(1, a)]).one("X^3", 1, &[]),
        ),
        4 => match q % 6 {
            1 => (
                "q=1 mod 6".into(),
                b.over("X^4+a(X^2+X), a in F*", qq - 1, &units, |a| vec![(2, a), (1, a)])
                    .over("X^4+aX^2, a in C2", 2, &c2, |a| vec![(2, a)])
                    .over("X^4+aX, a in C3", 3, &c3, |a| vec![(1, a)])
                    .one("X^4", 1, &[]),
            ),
            2 => (
                "q=2 mod 6".into(),
                b.over("X^4+X^3+aX, a in F", qq, &all, |a| vec![(3, 1), (1, a)])
                    .over("X^4+X^2+aX, a in F", qq, &all, |a| vec![(2, 1), (1, a)])
                    .one("X^4+X", 1, &[(1, 1)])
                    .one("X^4", 1, &[]),
            ),
            3 | 5 => (
                "q=3,5 mod 6".into(),
                b.over("X^4+a(X^2+X), a in F*", qq - 1, &units, |a| vec![(2, a), (1, a)])
                    .over("X^4+aX^2, a in C2", 2, &c2, |a| vec![(2, a)])
                    .one("X^4+X", 1, &[(1, 1)])
                    .one("X^4", 1, &[]),
            ),
            4 => (
                "q=4 mod 6".into(),
                b.over("X^4+X^3+aX, a in F", qq, &all, |a| vec![(3, 1), (1, a)])
                    .over("X^4+X^2+aX, a in F", qq, &all, |a| vec![(2, 1), (1, a)])
                    .over("X^4+aX, a in C3", 3, &c3, |a| vec![(1, a)])
                    .one("X^4", 1, &[]),
            ),
            _ => unreachable!("prime powers avoid 0 mod 6"),
        },
        5 => {
            let cubic = |b: RowBuilder| {
                b.over2(
                    "X^5+a(X^3+X^2)+bX, a in F*, b in F",
                    qq * qq - qq,
                    &units,
                    &all,
                    |a, c| vec![(3, a), (2, a), (1, c)],
                )
            };
            let quartic = |b: RowBuilder| {
                b.over2("X^5+X^4+aX^2+bX, a,b in F", qq * qq, &all, &all, |a, c| {
                    vec![(4, 1), (2, a), (1, c)]
                })
            };
            let c2_cubic = |b: RowBuilder| {
                b.over2("X^5+aX^3+bX, a in C2, b in F", 2 * qq, &c2, &all, |a, c| vec![(3, a), (1, c)])
            };
            match (q % 12, p == 5) {
                (1, true) => (
                    "q=1 mod 12, p=5".into(),
                    c2_cubic(quartic(b))
                        .over("X^5+aX^2, a in C3", 3, &c3, |a| vec![(2, a)])
                        .over("X^5+aX, a in C4", 4, &c4, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                (1, false) => (
                    "q=1 mod 12, p!=5".into(),
                    c2_cubic(cubic(b))
                        .over("X^5+a(X^2+X), a in F*", qq - 1, &units, |a| vec![(2, a), (1, a)])
                        .over("X^5+aX^2, a in C3", 3, &c3, |a| vec![(2, a)])
                        .over("X^5+aX, a in C4", 4, &c4, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                (2 | 8, _) => (
                    "q=2,8 mod 12".into(),
                    cubic(b)
                        .over("X^5+X^3+aX, a in F", qq, &all, |a| vec![(3, 1), (1, a)])
                        .over("X^5+X^2+aX, a in F", qq, &all, |a| vec![(2, 1), (1, a)])
                        .one("X^5+X", 1, &[(1, 1)])
                        .one("X^5", 1, &[]),
                ),
                (3 | 11, _) => (
                    "q=3,11 mod 12".into(),
                    c2_cubic(cubic(b))
                        .over("X^5+X^2+aX, a in F", qq, &all, |a| vec![(2, 1), (1, a)])
                        .over("X^5+aX, a in C2", 2, &c2, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                (4, _) => (
                    "q=4 mod 12".into(),
                    cubic(b)
                        .over("X^5+X^3+aX, a in F", qq, &all, |a| vec![(3, 1), (1, a)])
                        .over("X^5+a(X^2+X), a in F*", qq - 1, &units, |a| vec![(2, a), (1, a)])
                        .over("X^5+aX^2, a in C3", 3, &c3, |a| vec![(2, a)])
                        .one("X^5+X", 1, &[(1, 1)])
                        .one("X^5", 1, &[]),
                ),
                (5, true) => (
                    "q=5 mod 12, p=5".into(),
                    c2_cubic(quartic(b))
                        .one("X^5+X^2", 1, &[(2, 1)])
                        .over("X^5+aX, a in C4", 4, &c4, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                (5 | 9, false) => (
                    "q=5,9 mod 12, p!=5".into(),
                    c2_cubic(cubic(b))
                        .over("X^5+X^2+aX, a in F", qq, &all, |a| vec![(2, 1), (1, a)])
                        .over("X^5+aX, a in C4", 4, &c4, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                (7, _) => (
                    "q=7 mod 12".into(),
                    c2_cubic(cubic(b))
                        .over("X^5+a(X^2+X), a in F*", qq - 1, &units, |a| vec![(2, a), (1, a)])
                        .over("X^5+aX^2, a in C3", 3, &c3, |a| vec![(2, a)])
                        .over("X^5+aX, a in C2", 2, &c2, |a| vec![(1, a)])
                        .one("X^5", 1, &[]),
                ),
                _ => unreachable!("prime powers avoid 0, 6, 10 mod 12"),
            }
        }
        _ => return Err(ClassifyError::NoTable(n)),
    };
    Ok(TableRow { label, families: b.families })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub tag: String,
    pub expected: u64,
    pub instantiated: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub q: u64,
    pub n: usize,
    pub row: String,
    pub families: Vec<FamilyCheck>,
    /// Sum of the table's count column.
    pub table_total: u64,
    #[serde(with = "crate::counting::count_string")]
    pub frak_m: BigCount,
    /// Number of distinct classes among all listed representatives.
    pub distinct_classes: u64,
    pub representatives: u64,
}

impl TableCheck {
    pub fn pairwise_inequivalent(&self) -> bool {
        self.distinct_classes == self.representatives
    }

    pub fn passed(&self) -> bool {
        self.pairwise_inequivalent()
            && self.families.iter().all(|f| f.expected == f.instantiated)
            && BigCount::from(self.table_total) == self.frak_m
            && BigCount::from(self.representatives) == self.frak_m
    }
}

/// Instantiates the table row for `q` and checks it against canonical forms
/// and the class count.
pub fn verify_table(field: &FieldCtx, n: usize) -> Result<TableCheck, ClassifyError> {
    let row = table_row(field, n)?;
    let q = field.q() as u64;
    let mut canon = HashSet::new();
    let mut representatives = 0;
    let mut families = Vec::new();
    for fam in &row.families {
        for m in &fam.members {
            canon.insert(canonical_poly(field, m)?);
        }
        representatives += fam.members.len() as u64;
        families.push(FamilyCheck {
            tag: fam.tag.clone(),
            expected: fam.expected,
            instantiated: fam.members.len() as u64,
        });
    }
    Ok(TableCheck {
        q,
        n,
        row: row.label,
        table_total: row.families.iter().map(|f| f.expected).sum(),
        families,
        frak_m: counting::frak_m(q, n as u64)?,
        distinct_classes: canon.len() as u64,
        representatives,
    })
}

/// Least-index nonsquare of an odd-order field.
pub fn least_nonsquare(field: &FieldCtx) -> Option<Elem> {
    field.units().find(|&x| !field.is_square(x))
}

/// Representatives of the two classes of degree-2 rational functions.
pub fn degree2_rational_reps(field: &FieldCtx) -> Vec<RationalMap> {
    let ring = PolyRing::new(field);
    let x2 = Polynomial::monomial(1, 2);
    let first = RationalMap::polynomial(&ring, &x2).unwrap();
    let second = if field.q() % 2 == 0 {
        RationalMap::polynomial(&ring, &sparse(&[(2, 1), (1, 1)])).unwrap()
    } else {
        let b = least_nonsquare(field).expect("odd fields have nonsquares");
        RationalMap::normalize(&ring, &sparse(&[(2, 1), (0, b)]), &Polynomial::x()).unwrap()
    };
    vec![first, second]
}

/// Whether the degree-2 representatives lie in distinct orbits that exhaust
/// all classes.
pub fn verify_degree2_reps(field: &FieldCtx, budget: u64) -> Result<bool, ClassifyError> {
    let ring = PolyRing::new(field);
    let space = KeySpace::build(field, 2, budget)?;
    let orbits = crate::oracle::rational_orbits(&space);
    let codec = KeyCodec::new(field, 2);
    let labels: HashSet<u32> = degree2_rational_reps(field)
        .iter()
        .map(|f| {
            let code = codec.encode(&subfield_key(&ring, f));
            orbits.labels[space.index_of(code).expect("key is enumerated")]
        })
        .collect();
    Ok(labels.len() == 2 && orbits.count == 2)
}
