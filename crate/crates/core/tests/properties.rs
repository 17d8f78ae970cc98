use fqequiv::classify::canonical_poly;
use fqequiv::oracle::{enumerate_classes, KeySpace, PolySpace};
use fqequiv::polyring::{tilde, PolyRing, Polynomial};
use fqequiv::ratmap::{act, subfield_key, KeyCodec, MoebiusTransform, RationalMap};
use fqequiv::{counting, numtheory, Elem, ExtFieldCtx, FieldCtx};
use proptest::prelude::*;

const ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fn elem(q: u32) -> impl Strategy<Value = Elem> {
    0..q
}

fn poly_with(q: u32, max_len: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(Polynomial::from_coeffs)
}

/// A field together with raw material drawn from it.
fn field_and<T: std::fmt::Debug + Clone>(
    orders: &'static [u64],
    inner: impl Fn(u32) -> BoxedStrategy<T> + 'static,
) -> impl Strategy<Value = (FieldCtx, T)> {
    prop::sample::select(orders.to_vec()).prop_flat_map(move |q| {
        let f = FieldCtx::of_order(q).unwrap();
        (Just(f), inner(q as u32))
    })
}

fn unit_matrix(f: &FieldCtx, m: [Elem; 4]) -> Option<MoebiusTransform> {
    MoebiusTransform::new(f, m[0], m[1], m[2], m[3]).ok()
}

/// A degree-`n` rational map built from raw coefficients, if they give one.
fn rational_map(f: &FieldCtx, num: &[Elem], den: &[Elem], n: usize) -> Option<RationalMap> {
    let ring = PolyRing::new(f);
    let g = RationalMap::normalize(
        &ring,
        &Polynomial::from_coeffs(num.to_vec()),
        &Polynomial::from_coeffs(den.to_vec()),
    )
    .ok()?;
    (g.degree() == n).then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((f, (a, b, c)) in field_and(&ORDERS, |q| (elem(q), elem(q), elem(q)).boxed())) {
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, f.q() as u64 - 1), 1);
            prop_assert_eq!((f.q() as u64 - 1) % f.mult_order(a).unwrap(), 0);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
        prop_assert_eq!(f.from_digits(&f.digits(a)), a);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative((f, (a, b)) in field_and(&ORDERS, |q| (elem(q), elem(q)).boxed())) {
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(f.mul(a, b), p), f.mul(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn gcd_divides_both((f, (g, h)) in field_and(&[2, 3, 4, 5, 7], |q| (poly_with(q, 7), poly_with(q, 7)).boxed())) {
        let ring = PolyRing::new(&f);
        prop_assume!(!g.is_zero() || !h.is_zero());
        let d = ring.gcd(&g, &h).unwrap();
        prop_assert!(d.is_monic());
        prop_assert!(ring.rem(&g, &d).unwrap().is_zero());
        prop_assert!(ring.rem(&h, &d).unwrap().is_zero());
        let prod = ring.mul(&g, &h);
        if !g.is_zero() && !h.is_zero() {
            prop_assert_eq!(prod.degree().unwrap(), g.degree().unwrap() + h.degree().unwrap());
        }
    }

    #[test]
    fn tilde_is_multiplicative_and_involutive((q, g, h) in prop::sample::select(vec![2u64, 3]).prop_flat_map(|q| {
        (Just(q), poly_with((q * q) as u32, 5), poly_with((q * q) as u32, 5))
    })) {
        let base = FieldCtx::of_order(q).unwrap();
        let ext = ExtFieldCtx::new(&base).unwrap();
        let ring = PolyRing::new(ext.ext());
        prop_assume!(!g.is_zero() && !h.is_zero());
        let lhs = tilde(&ext, &ring.mul(&g, &h)).unwrap();
        let rhs = ring.mul(&tilde(&ext, &g).unwrap(), &tilde(&ext, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
        if g.coeff(0) != 0 {
            prop_assert_eq!(tilde(&ext, &tilde(&ext, &g).unwrap()).unwrap(), g);
        }
    }

    #[test]
    fn key_ignores_basis_change(
        (f, (num, den, m)) in field_and(&[2, 3, 4, 5, 7], |q| {
            (prop::collection::vec(0..q, 4), prop::collection::vec(0..q, 4), prop::array::uniform4(0..q)).boxed()
        })
    ) {
        let ring = PolyRing::new(&f);
        let Some(g) = rational_map(&f, &num, &den, 3) else { return Ok(()) };
        let Some(phi) = unit_matrix(&f, m) else { return Ok(()) };
        // phi o g spans the same pair of polynomials
        let [a, b, c, d] = phi.entries();
        let p = ring.add(&ring.scale(g.num(), a), &ring.scale(g.den(), b));
        let r = ring.add(&ring.scale(g.num(), c), &ring.scale(g.den(), d));
        let h = RationalMap::normalize(&ring, &p, &r).unwrap();
        let key = subfield_key(&ring, &g);
        prop_assert_eq!(&subfield_key(&ring, &h), &key);
        let codec = KeyCodec::new(&f, 3);
        prop_assert_eq!(codec.decode(codec.encode(&key)), key.clone());
        prop_assert_eq!(subfield_key(&ring, &key.to_map()), key);
    }

    #[test]
    fn right_action_composes(
        (f, (num, den, ma, mb)) in field_and(&[2, 3, 4, 5], |q| {
            (
                prop::collection::vec(0..q, 4),
                prop::collection::vec(0..q, 4),
                prop::array::uniform4(0..q),
                prop::array::uniform4(0..q),
            ).boxed()
        })
    ) {
        let ring = PolyRing::new(&f);
        let Some(g) = rational_map(&f, &num, &den, 3) else { return Ok(()) };
        let (Some(a), Some(b)) = (unit_matrix(&f, ma), unit_matrix(&f, mb)) else { return Ok(()) };
        let once = act(&ring, &g, &a.mul(&f, &b)).unwrap();
        let twice = act(&ring, &act(&ring, &g, &a).unwrap(), &b).unwrap();
        prop_assert_eq!(subfield_key(&ring, &once), subfield_key(&ring, &twice));
        let back = act(&ring, &act(&ring, &g, &a).unwrap(), &a.inverse(&f)).unwrap();
        prop_assert_eq!(subfield_key(&ring, &back), subfield_key(&ring, &g));
    }

    #[test]
    fn canonical_form_is_class_invariant(
        (f, (coeffs, a, b)) in field_and(&[2, 3, 4, 5, 7], |q| {
            (prop::collection::vec(0..q, 4), 1..q, 0..q).boxed()
        })
    ) {
        let ring = PolyRing::new(&f);
        let mut c = coeffs;
        c.push(1);
        let g = Polynomial::from_coeffs(c);
        let moved = ring.compose(&g, &Polynomial::from_coeffs(vec![b, a]));
        let moved = ring.add(&ring.scale(&moved, a), &Polynomial::constant(b));
        prop_assert_eq!(canonical_poly(&f, &g).unwrap(), canonical_poly(&f, &moved).unwrap());
    }

    #[test]
    fn counts_are_exact_integers(q in prop::sample::select(ORDERS.to_vec()), n in 1u64..=8) {
        let total = counting::frak_n(q, n).unwrap();
        prop_assert!(total >= counting::frak_n(q, 1).unwrap());
        let m = counting::frak_m(q, n).unwrap();
        // at least one class, at most one per monic zero-constant polynomial
        prop_assert!(m >= 1u32.into());
        prop_assert!(m <= num_traits::pow(counting::BigCount::from(q), n as usize - 1));
    }

    #[test]
    fn totient_sums_to_n(n in 1u64..2000) {
        let s: u64 = numtheory::divisors(n).into_iter().map(numtheory::totient).sum();
        prop_assert_eq!(s, n);
    }
}

#[test]
fn delta_decomposition_reconstructs() {
    for q in [2u64, 3] {
        let f = FieldCtx::of_order(q).unwrap();
        let ring = PolyRing::new(&f);
        let h = ring.artin_schreier();
        for g in ring.all_up_to_degree(6) {
            let parts = ring.delta_decompose(&g);
            assert_eq!(parts.len(), f.p() as usize);
            let rebuilt = parts.iter().enumerate().fold(Polynomial::zero(), |acc, (j, part)| {
                ring.add(&acc, &ring.mul(&ring.compose(part, &h), &Polynomial::monomial(1, j)))
            });
            assert_eq!(rebuilt, g);
        }
    }
}

#[test]
fn delta_kernel_matches_decomposition() {
    for q in [2u64, 3] {
        let f = FieldCtx::of_order(q).unwrap();
        let ring = PolyRing::new(&f);
        let p = f.p();
        for g in ring.all_up_to_degree(6) {
            assert!(ring.delta_kernel_basis_check(&g, p).unwrap());
            let parts = ring.delta_decompose(&g);
            for i in 0..p {
                let vanishes = parts[i as usize..].iter().all(Polynomial::is_zero);
                assert_eq!(ring.delta_kernel_basis_check(&g, i).unwrap(), vanishes, "q={q} i={i} g={g:?}");
            }
        }
        assert!(ring.delta_kernel_basis_check(&Polynomial::x(), p + 1).is_err());
    }
}

#[test]
fn delta_squared_kills_x_cubed_in_characteristic_two() {
    let f = FieldCtx::of_order(2).unwrap();
    let ring = PolyRing::new(&f);
    let x3 = Polynomial::monomial(1, 3);
    assert!(!ring.delta(&x3).is_zero());
    assert!(ring.delta_pow(&x3, 2).is_zero());
}

/// Brute-force centralizers of every class representative, and conjugacy
/// closure of the representatives over all of `GL(2, q)`.
#[test]
fn class_representatives_by_brute_force() {
    for q in [2u64, 3, 4, 5] {
        let f = FieldCtx::of_order(q).unwrap();
        let mat_mul = |x: [Elem; 4], y: [Elem; 4]| {
            let m = |a, b| f.mul(a, b);
            [
                f.add(m(x[0], y[0]), m(x[1], y[2])),
                f.add(m(x[0], y[1]), m(x[1], y[3])),
                f.add(m(x[2], y[0]), m(x[3], y[2])),
                f.add(m(x[2], y[1]), m(x[3], y[3])),
            ]
        };
        let group: Vec<[Elem; 4]> = (0..q.pow(4))
            .map(|i| {
                let d = |k: u32| ((i / q.pow(k)) % q) as Elem;
                [d(0), d(1), d(2), d(3)]
            })
            .filter(|m| f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2])) != 0)
            .collect();
        assert_eq!(counting::BigCount::from(group.len()), fqequiv::oracle::gl2_order(q));
        let classes = enumerate_classes(&f);
        let mut owner = std::collections::HashMap::new();
        for (idx, rep) in classes.iter().enumerate() {
            let cent = group.iter().filter(|&&g| mat_mul(g, rep.matrix) == mat_mul(rep.matrix, g)).count();
            assert_eq!(counting::BigCount::from(cent), rep.centralizer_size, "q={q} {:?}", rep.kind);
            for &g in &group {
                let det_inv = f.inv(f.sub(f.mul(g[0], g[3]), f.mul(g[1], g[2]))).unwrap();
                let g_inv = [f.mul(g[3], det_inv), f.neg(f.mul(g[1], det_inv)), f.neg(f.mul(g[2], det_inv)), f.mul(g[0], det_inv)];
                let conj = mat_mul(mat_mul(g, rep.matrix), g_inv);
                let prev = owner.insert(conj, idx);
                assert!(prev.is_none_or(|p| p == idx), "q={q}: representatives {prev:?} and {idx} are conjugate");
            }
        }
        assert_eq!(owner.len(), group.len(), "q={q}: classes do not cover the group");
    }
}

#[test]
fn key_space_and_poly_space_sizes() {
    for q in [2u64, 3, 4] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=3 {
            let keys = KeySpace::build(&f, n, 1 << 20).unwrap();
            assert_eq!(keys.len() as u64, q.pow(2 * (n as u32 - 1)));
            let polys = PolySpace::new(&f, n, 1 << 20).unwrap();
            assert_eq!(polys.len(), q.pow(n as u32 - 1));
            for i in 0..polys.len() {
                assert_eq!(polys.index_of(&polys.polynomial(i)), i);
            }
        }
    }
}
