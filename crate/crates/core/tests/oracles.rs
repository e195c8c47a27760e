//! Independent cross-checks: balls against a brute-force enumeration of
//! window sublattices, radicals against an exhaustive nilpotent-ideal search,
//! and the polytrope parametrization against the stabilizer computation.

use bolytrope_core::building::{ball, class_of, ClassSet, LatticeClass};
use bolytrope_core::fp::{fp_mul, fp_sub};
use bolytrope_core::lattice::Lattice;
use bolytrope_core::matrix::RationalMatrix;
use bolytrope_core::order::{
    algebra_radical, is_nilpotent_subspace, jacobson_radical, lattice_product, pz_order,
    residue_algebra, Order, ResidueAlgebra,
};
use bolytrope_core::polytrope::{
    ball_order, bolytrope_order, graduated_order, polytrope_class_set, ExponentMatrix,
};
use bolytrope_core::valuation::{scalar_int, PAdicContext};
use bolytrope_core::{invariant_classes, Apartment};

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p).unwrap()
}

/// Every sublattice between p^r L and L, by direct enumeration of reduced
/// triangular bases. The independent route to ball membership.
fn window_classes(p: u64, d: usize, r: i64) -> ClassSet {
    let c = ctx(p);
    let standard = Lattice::standard(c, d);
    let scaled = standard.scale_p(r);
    let mut diag = vec![0i64; d];
    let mut found: Vec<LatticeClass> = Vec::new();
    'diag: loop {
        // below-diagonal positions and their ranges for this diagonal choice
        let positions: Vec<(usize, usize, i64)> = (0..d)
            .flat_map(|i| (0..i).map(move |j| (i, j, 0)))
            .map(|(i, j, _)| (i, j, (p as i64).pow(diag[i] as u32)))
            .collect();
        let mut values: Vec<i64> = positions.iter().map(|_| 0).collect();
        loop {
            let m = RationalMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    c.p_pow(diag[i])
                } else if i > j {
                    let idx = positions
                        .iter()
                        .position(|&(a, b, _)| (a, b) == (i, j))
                        .unwrap();
                    scalar_int(values[idx])
                } else {
                    scalar_int(0)
                }
            });
            let l = Lattice::canonicalize(c, &m).unwrap();
            if l.contains(&scaled) {
                let cls = class_of(&l);
                assert!(cls.distance(&class_of(&standard)) <= r);
                found.push(cls);
            }
            let mut i = 0;
            loop {
                if i == values.len() {
                    // advance the diagonal odometer
                    let mut k = 0;
                    loop {
                        if k == d {
                            break 'diag;
                        }
                        diag[k] += 1;
                        if diag[k] <= r {
                            break;
                        }
                        diag[k] = 0;
                        k += 1;
                    }
                    break;
                }
                values[i] += 1;
                if values[i] < positions[i].2 {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if values.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    ClassSet::new(found)
}

#[test]
fn balls_match_window_enumeration() {
    let expected_small: &[(u64, usize, i64, usize)] =
        &[(2, 2, 1, 4), (2, 2, 2, 10), (3, 2, 1, 5), (3, 2, 2, 17)];
    for &(p, d, r, size) in expected_small {
        let b = ball(&class_of(&Lattice::standard(ctx(p), d)), r, 100_000).unwrap();
        assert_eq!(b.len(), size, "ball size at p={p} d={d} r={r}");
        assert_eq!(
            b,
            window_classes(p, d, r),
            "window oracle at p={p} d={d} r={r}"
        );
    }
    for (p, d, r) in [(2u64, 3usize, 1i64), (2, 3, 2), (3, 3, 1), (3, 3, 2)] {
        let b = ball(&class_of(&Lattice::standard(ctx(p), d)), r, 100_000).unwrap();
        let oracle = window_classes(p, d, r);
        assert_eq!(b, oracle, "window oracle at p={p} d={d} r={r}");
    }
}

#[test]
fn ball_members_are_exactly_the_close_classes() {
    // the distance filter route: every window class at distance <= r and
    // nothing else from the next window out
    let p = 2;
    let c = ctx(p);
    let center = class_of(&Lattice::standard(c, 2));
    let b1 = ball(&center, 1, 100_000).unwrap();
    for cl in &window_classes(p, 2, 2) {
        let dist = cl.distance(&center);
        assert_eq!(b1.contains(cl), dist <= 1);
    }
}

/// Exhaustively confirm the computed radical is maximal among nilpotent
/// two-sided ideals: adjoining any outside coset breaks nilpotency.
fn assert_radical_maximal(a: &ResidueAlgebra, rad: &[Vec<u64>]) {
    let n = a.dim();
    let p = a.p();
    let free = n - rad.len();
    let count = (p as u128).pow(free as u32);
    assert!(count <= 65_536, "exhaustive verifier bound");
    // echelon data for the radical
    let mut mat = bolytrope_core::fp::FpMatrix::zeros(p, rad.len().max(1), n);
    for (i, v) in rad.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            mat.set(i, j, x);
        }
    }
    let pivots = mat.rref();
    let complement: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let units: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut coset = vec![0u64; free];
    loop {
        // advance first; the zero coset is the radical itself
        let mut i = 0;
        loop {
            if i == free {
                return;
            }
            coset[i] += 1;
            if coset[i] < p {
                break;
            }
            coset[i] = 0;
            i += 1;
        }
        let mut x = vec![0u64; n];
        for (t, &j) in complement.iter().enumerate() {
            x[j] = coset[t];
        }
        // two-sided ideal closure of rad + x
        let mut ideal: Vec<Vec<u64>> = rad.to_vec();
        ideal.push(x);
        loop {
            let mut grew = false;
            let span = span_matrix(p, n, &ideal);
            let mut next = ideal.clone();
            for w in &ideal {
                for u in &units {
                    for prod in [a.mul(u, w), a.mul(w, u)] {
                        if !in_row_span(&span, &prod) {
                            next.push(prod);
                            grew = true;
                        }
                    }
                }
            }
            ideal = reduce_basis(p, n, &next);
            if !grew {
                break;
            }
        }
        assert!(
            !is_nilpotent_subspace(a, &ideal),
            "element outside the radical generated a nilpotent ideal"
        );
    }
}

fn span_matrix(p: u64, n: usize, vs: &[Vec<u64>]) -> bolytrope_core::fp::FpMatrix {
    let mut m = bolytrope_core::fp::FpMatrix::zeros(p, vs.len().max(1), n);
    for (i, v) in vs.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m.rref();
    m
}

fn in_row_span(rref: &bolytrope_core::fp::FpMatrix, v: &[u64]) -> bool {
    let p = rref.p;
    let mut w = v.to_vec();
    for i in 0..rref.rows {
        let Some(pc) = (0..rref.cols).find(|&j| rref.at(i, j) != 0) else {
            break;
        };
        if w[pc] != 0 {
            let f = w[pc];
            for j in 0..rref.cols {
                w[j] = fp_sub(w[j], fp_mul(f, rref.at(i, j), p), p);
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

fn reduce_basis(p: u64, n: usize, vs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut m = bolytrope_core::fp::FpMatrix::zeros(p, vs.len(), n);
    for (i, v) in vs.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let pivots = m.rref();
    (0..pivots.len())
        .map(|i| (0..n).map(|j| m.at(i, j)).collect())
        .collect()
}

#[test]
fn radical_survives_exhaustive_maximality_check() {
    let orders: Vec<Order> = vec![
        graduated_order(
            &Apartment::standard(ctx(2), 2),
            &ExponentMatrix::ones_off_diagonal(2),
        ),
        graduated_order(
            &Apartment::standard(ctx(3), 2),
            &ExponentMatrix::from_rows(&[vec![0, 2], vec![1, 0]]).unwrap(),
        ),
        ball_order(&Lattice::standard(ctx(2), 2), 1),
        graduated_order(
            &Apartment::standard(ctx(2), 3),
            &ExponentMatrix::ones_off_diagonal(3),
        ),
        bolytrope_order(
            &Apartment::standard(ctx(2), 2),
            &ExponentMatrix::from_rows(&[vec![0, 2], vec![0, 0]]).unwrap(),
            1,
        ),
    ];
    for order in &orders {
        let a = residue_algebra(order);
        let rad = algebra_radical(&a).unwrap();
        assert_radical_maximal(&a, &rad);
    }
}

#[test]
fn radical_powers_land_in_p_times_the_order() {
    let instances: Vec<Order> = vec![
        graduated_order(
            &Apartment::standard(ctx(2), 3),
            &ExponentMatrix::from_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap(),
        ),
        ball_order(&Lattice::standard(ctx(3), 2), 2),
        bolytrope_order(
            &Apartment::standard(ctx(2), 2),
            &ExponentMatrix::from_rows(&[vec![0, 3], vec![1, 0]]).unwrap(),
            1,
        ),
    ];
    for order in instances {
        let d = order.matrix_dim();
        let jac = jacobson_radical(&order);
        let p_order = order.carrier().scale_p(1);
        assert!(order.carrier().contains(&jac));
        assert!(jac.contains(&p_order));
        let mut power = jac.clone();
        let mut n = 1;
        while !p_order.contains(&power) {
            power = lattice_product(d, &power, &jac);
            n += 1;
            assert!(n <= d * d, "radical power escapes p * order");
        }
        // semisimple quotient: re-application on the quotient finds nothing
        let a = residue_algebra(&order);
        let rad = algebra_radical(&a).unwrap();
        let quotient = a.quotient(&rad).unwrap();
        assert!(algebra_radical(&quotient).unwrap().is_empty());
    }
}

#[test]
fn polytrope_points_parametrize_graduated_invariants() {
    for (p, rows) in [
        (2u64, vec![vec![0, 0], vec![1, 0]]),
        (3, vec![vec![0, 2], vec![1, 0]]),
        (2, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]),
        (3, vec![vec![0, 2, 2], vec![1, 0, 2], vec![1, 1, 0]]),
    ] {
        let m = ExponentMatrix::from_rows(&rows).unwrap();
        let apartment = Apartment::standard(ctx(p), m.d());
        let order = graduated_order(&apartment, &m);
        let stable = invariant_classes(&order, 100_000).unwrap();
        assert_eq!(
            stable,
            polytrope_class_set(&apartment, &m),
            "M = {rows:?} p = {p}"
        );
    }
}

#[test]
fn pz_of_the_paper_pair_is_the_graduated_order() {
    let c = ctx(2);
    let apartment = Apartment::standard(c, 2);
    let set = ClassSet::new(vec![
        apartment.class_at(&[0, 0]),
        apartment.class_at(&[0, 1]),
    ]);
    let pz = pz_order(&set).unwrap();
    let expected = graduated_order(
        &apartment,
        &ExponentMatrix::from_rows(&[vec![0, 0], vec![1, 0]]).unwrap(),
    );
    assert_eq!(pz.carrier(), expected.carrier());
}

/// Characteristic polynomial by cofactor expansion over F_p[t], the slow
/// route used to confirm the division-free implementation.
mod charpoly_oracle {
    use bolytrope_core::fp::{fp_add, fp_mul, fp_sub, FpMatrix};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type Poly = Vec<u64>; // coefficients from the constant term up

    fn poly_add(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                fp_add(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect()
    }

    fn poly_sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                fp_sub(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect()
    }

    fn poly_mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = fp_add(out[i + j], fp_mul(x, y, p), p);
            }
        }
        out
    }

    fn det_poly(m: &[Vec<Poly>], p: u64) -> Poly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = vec![0u64];
        for col in 0..n {
            let minor: Vec<Vec<Poly>> = (1..n)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != col)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let term = poly_mul(&m[0][col], &det_poly(&minor, p), p);
            acc = if col % 2 == 0 {
                poly_add(&acc, &term, p)
            } else {
                poly_sub(&acc, &term, p)
            };
        }
        acc
    }

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let mut rng = StdRng::seed_from_u64(41);
        for trial in 0..60 {
            let p = [2u64, 3, 5][trial % 3];
            let n = 2 + trial % 4;
            let mut mat = FpMatrix::zeros(p, n, n);
            for i in 0..n {
                for j in 0..n {
                    mat.set(i, j, rng.gen_range(0..p));
                }
            }
            // entries of t*I - M as polynomials
            let sym: Vec<Vec<Poly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let c = fp_sub(0, mat.at(i, j), p);
                            if i == j {
                                vec![c, 1]
                            } else {
                                vec![c]
                            }
                        })
                        .collect()
                })
                .collect();
            let mut expected = det_poly(&sym, p);
            expected.resize(n + 1, 0);
            expected.reverse(); // leading coefficient first
            assert_eq!(mat.charpoly(), expected, "trial {trial} p={p} n={n}");
        }
    }
}

#[test]
fn one_dimensional_building_is_a_point() {
    let c = ctx(2);
    let l = Lattice::standard(c, 1);
    let center = class_of(&l);
    assert_eq!(bolytrope_core::neighbors(&center).len(), 0);
    assert_eq!(ball(&center, 3, 100).unwrap().len(), 1);
    assert_eq!(class_of(&l.scale_p(5)), center);
}

/// The distance straight from its definition: the least s admitting
/// representatives with p^s L1' <= L2' <= L1', found by scanning scalings.
#[test]
fn distance_matches_the_containment_definition() {
    use bolytrope_core::sampling::random_class;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(42);
    for trial in 0..60 {
        let p = [2u64, 3][trial % 2];
        let d = 2 + trial % 2;
        let c = ctx(p);
        let x = random_class(&mut rng, c, d, 2);
        let y = random_class(&mut rng, c, d, 2);
        let dist = x.distance(&y);
        let witness = |s: i64| -> bool {
            // p^s X <= p^k Y <= X for some scaling k of the representative
            (-12..=12i64).any(|k| {
                let scaled = y.rep().scale_p(k);
                x.rep().contains(&scaled) && scaled.contains(&x.rep().scale_p(s))
            })
        };
        assert!(witness(dist), "no witness at the distance, trial {trial}");
        if dist > 0 {
            assert!(
                !witness(dist - 1),
                "witness below the distance, trial {trial}"
            );
        }
    }
}

/// Ball and bolytrope carriers agree with their entrywise congruence
/// descriptions, checked by membership of random matrices.
#[test]
fn congruence_description_of_ball_and_bolytrope_orders() {
    use bolytrope_core::matrix::vec_col_major;
    use bolytrope_core::valuation::{scalar_ratio, Valuation};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(43);
    let val_ok = |v: Valuation, bound: i64| match v {
        Valuation::Infinite => true,
        Valuation::Finite(f) => f >= bound,
    };
    for p in [2u64, 3] {
        let c = ctx(p);
        for (d, rows) in [
            (2usize, vec![vec![0, 2], vec![1, 0]]),
            (3, vec![vec![0, 1, 2], vec![1, 0, 1], vec![1, 1, 0]]),
        ] {
            let m = ExponentMatrix::from_rows(&rows).unwrap();
            for r in [0i64, 1, 2] {
                let ball = ball_order(&Lattice::standard(c, d), r);
                let boly = bolytrope_order(&Apartment::standard(c, d), &m, r);
                for _ in 0..80 {
                    let x = RationalMatrix::from_fn(d, d, |_, _| {
                        scalar_ratio(
                            rng.gen_range(-24..=24),
                            [1, p as i64, (p * p) as i64][rng.gen_range(0..3)],
                        )
                    });
                    let expected = |bound: &ExponentMatrix| -> bool {
                        let entries_ok = (0..d).all(|i| {
                            (0..d).all(|j| {
                                let b = if i == j { 0 } else { bound.at(i, j) + r };
                                val_ok(c.valuation(x.at(i, j)), b)
                            })
                        });
                        let congruent = (1..d).all(|i| {
                            let diff = x.at(0, 0) - x.at(i, i);
                            val_ok(c.valuation(&diff), r)
                        });
                        entries_ok && congruent
                    };
                    assert_eq!(
                        ball.carrier().member(&vec_col_major(&x)),
                        expected(&ExponentMatrix::zero(d)),
                        "ball p={p} d={d} r={r}\n{x}"
                    );
                    assert_eq!(
                        boly.carrier().member(&vec_col_major(&x)),
                        expected(&m),
                        "bolytrope p={p} d={d} r={r}\n{x}"
                    );
                }
            }
        }
    }
}

/// Stabilizer enumeration against brute force: filter a large ball by the
/// stabilization predicate and compare with the connected search.
#[test]
fn invariant_classes_match_brute_force_ball_filter() {
    use bolytrope_core::building::is_stable;
    use bolytrope_core::{bolytrope_order, graduated_order, invariant_classes};
    let cases: Vec<(u64, Order)> = vec![
        (
            2,
            graduated_order(
                &Apartment::standard(ctx(2), 2),
                &ExponentMatrix::from_rows(&[vec![0, 3], vec![1, 0]]).unwrap(),
            ),
        ),
        (
            3,
            bolytrope_order(
                &Apartment::standard(ctx(3), 2),
                &ExponentMatrix::from_rows(&[vec![0, 2], vec![0, 0]]).unwrap(),
                1,
            ),
        ),
        (
            2,
            bolytrope_order(
                &Apartment::standard(ctx(2), 3),
                &ExponentMatrix::ones_off_diagonal(3),
                1,
            ),
        ),
    ];
    for (_p, order) in cases {
        let stable = invariant_classes(&order, 1_000_000).unwrap();
        // radius that surely covers the set, plus one
        let seed = stable.get(0);
        let radius = stable.iter().map(|c| seed.distance(c)).max().unwrap() + 1;
        let fat = ball(seed, radius, 1_000_000).unwrap();
        let filtered: ClassSet = fat
            .iter()
            .filter(|c| is_stable(&order, c))
            .cloned()
            .collect();
        assert_eq!(filtered, stable);
    }
}

/// Transporters are exactly the matrices carrying one lattice into another,
/// and are tight: dividing any basis element by p breaks the containment.
#[test]
fn transporter_semantics_and_tightness() {
    use bolytrope_core::matrix::unvec_col_major;
    use bolytrope_core::sampling::random_class;
    use bolytrope_core::transporter;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(44);
    for trial in 0..30 {
        let p = [2u64, 3][trial % 2];
        let d = 2 + trial % 2;
        let c = ctx(p);
        let target = random_class(&mut rng, c, d, 1).rep().clone();
        let source = random_class(&mut rng, c, d, 1).rep().clone();
        let t = transporter(&target, &source);
        for col in t.basis().columns() {
            let x = unvec_col_major(d, &col);
            for j in 0..d {
                let moved = x.mul_vec(&source.basis().column(j));
                assert!(target.member(&moved), "trial {trial}");
            }
            // tightness
            let shrunk = x.scale(&c.p_pow(-1));
            let escapes = (0..d).any(|j| {
                let moved = shrunk.mul_vec(&source.basis().column(j));
                !target.member(&moved)
            });
            assert!(escapes, "transporter not tight at trial {trial}");
        }
    }
}

/// The dual is the set of vectors pairing integrally with the lattice.
#[test]
fn dual_pairing_semantics() {
    use bolytrope_core::sampling::random_class;
    use bolytrope_core::valuation::Scalar;
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(45);
    let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        a.iter()
            .zip(b)
            .map(|(x, y)| x * y)
            .fold(Scalar::zero(), |s, t| s + t)
    };
    for trial in 0..30 {
        let p = [2u64, 3][trial % 2];
        let d = 2 + trial % 2;
        let c = ctx(p);
        let l = random_class(&mut rng, c, d, 2).rep().clone();
        let dual = l.dual();
        for i in 0..d {
            for j in 0..d {
                assert!(c.is_integral(&dot(&dual.basis().column(i), &l.basis().column(j))));
            }
            // tightness of the dual
            let shrunk: Vec<Scalar> = dual
                .basis()
                .column(i)
                .into_iter()
                .map(|x| x * c.p_pow(-1))
                .collect();
            assert!((0..d).any(|j| !c.is_integral(&dot(&shrunk, &l.basis().column(j)))));
        }
    }
}

/// Idealizer semantics straight from the definition: every basis element
/// multiplies the lattice into itself on both sides, and dividing any basis
/// element by p breaks one of the containments.
#[test]
fn idealizer_semantics_and_tightness() {
    use bolytrope_core::matrix::{unvec_col_major, vec_col_major};
    use bolytrope_core::order::idealizer;
    let instances: Vec<(usize, Lattice)> = vec![
        (
            2,
            jacobson_radical(&graduated_order(
                &Apartment::standard(ctx(2), 2),
                &ExponentMatrix::from_rows(&[vec![0, 2], vec![1, 0]]).unwrap(),
            )),
        ),
        (
            2,
            jacobson_radical(&ball_order(&Lattice::standard(ctx(3), 2), 2)),
        ),
        (
            3,
            jacobson_radical(&graduated_order(
                &Apartment::standard(ctx(2), 3),
                &ExponentMatrix::ones_off_diagonal(3),
            )),
        ),
    ];
    for (d, lattice) in instances {
        let ctx = lattice.ctx();
        let idealized = idealizer(d, &lattice).unwrap();
        let gens: Vec<RationalMatrix> = lattice
            .basis()
            .columns()
            .into_iter()
            .map(|c| unvec_col_major(d, &c))
            .collect();
        for col in idealized.carrier().basis().columns() {
            let x = unvec_col_major(d, &col);
            for g in &gens {
                assert!(lattice.member(&vec_col_major(&x.mul(g))));
                assert!(lattice.member(&vec_col_major(&g.mul(&x))));
            }
            let shrunk = x.scale(&ctx.p_pow(-1));
            let escapes = gens.iter().any(|g| {
                !lattice.member(&vec_col_major(&shrunk.mul(g)))
                    || !lattice.member(&vec_col_major(&g.mul(&shrunk)))
            });
            assert!(escapes, "idealizer not tight");
        }
    }
}

/// Chains of random graduated orders descend through the invariant classes
/// and land on a simplex.
#[test]
fn chains_terminate_in_simplices() {
    use bolytrope_core::sampling::random_exponent_matrix;
    use bolytrope_core::{is_simplex, radical_idealizer_chain};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(46);
    for trial in 0..8 {
        let p = [2u64, 3][trial % 2];
        let d = 2 + trial % 2;
        let m = random_exponent_matrix(&mut rng, d, 4);
        let order = graduated_order(&Apartment::standard(ctx(p), d), &m);
        let chain = radical_idealizer_chain(&order).unwrap();
        let sets: Vec<ClassSet> = chain
            .iter()
            .map(|t| invariant_classes(t, 1_000_000).unwrap())
            .collect();
        for w in sets.windows(2) {
            assert!(w[1].is_subset_of(&w[0]));
            assert!(w[1].len() < w[0].len());
        }
        assert!(is_simplex(sets.last().unwrap()), "trial {trial}");
    }
}
