//! Named verification suites. Each suite checks one structural identity at
//! desk scale and reports pass/fail with details; random sampling is seeded,
//! so reports are reproducible run to run.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::building::{
    ball, ball_around_set, class_of, geodesic, invariant_classes, is_simplex, Apartment, ClassSet,
};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::{vec_col_major, RationalMatrix};
use crate::order::{degree_exact_small, is_closed, pz_order, radical_idealizer_chain, Order};
use crate::polytrope::{
    ball_order, bolystar_generators, bolytrope, bolytrope_order, central_polytrope,
    d2_canonical_form, graduated_order, normalize_base_point, polytrope_class_set,
    polytrope_points, star_conditions_hold, star_configuration, ExponentMatrix,
};
use crate::sampling::{random_basis, random_class, random_exponent_matrix, random_integral_class};
use crate::valuation::{scalar_int, PAdicContext, Scalar};

pub const SUITE_IDS: &[&str] = &[
    "ball-theorem",
    "apartment-slice",
    "bolytrope-theorem",
    "radical-chains",
    "fig1-chain",
    "star-configurations",
    "d4-degree",
    "d2-classification",
    "non-closed-example",
    "metric-geodesics",
    "bolystar-generators",
];

#[derive(Debug)]
pub struct SuiteReport {
    pub id: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl SuiteReport {
    pub fn summary_line(&self) -> String {
        format!("{}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id)
    }
}

struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn new() -> Self {
        Checks {
            failures: Vec::new(),
            count: 0,
        }
    }

    fn expect(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    fn finish(self, id: &str) -> SuiteReport {
        let mut details = vec![format!("{} checks", self.count)];
        details.extend(self.failures.iter().cloned());
        SuiteReport {
            id: id.into(),
            passed: self.failures.is_empty(),
            details,
        }
    }
}

pub fn run_suite(id: &str, cap: usize) -> Result<SuiteReport> {
    match id {
        "ball-theorem" => Ok(ball_theorem(cap)),
        "apartment-slice" => Ok(apartment_slice_suite(cap)),
        "bolytrope-theorem" => Ok(bolytrope_theorem(cap)),
        "radical-chains" => Ok(radical_chains(cap)),
        "fig1-chain" => Ok(fig1_chain(cap)),
        "star-configurations" => Ok(star_configurations()),
        "d4-degree" => Ok(d4_degree(cap)),
        "d2-classification" => Ok(d2_classification(cap)),
        "non-closed-example" => Ok(non_closed_example(cap)),
        "metric-geodesics" => Ok(metric_geodesics()),
        "bolystar-generators" => Ok(bolystar_suite(cap)),
        other => Err(Error::Domain(format!(
            "unknown suite {:?}; available: {}",
            other,
            SUITE_IDS.join(", ")
        ))),
    }
}

pub fn run_all(cap: usize) -> Result<Vec<SuiteReport>> {
    SUITE_IDS.iter().map(|id| run_suite(id, cap)).collect()
}

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p).unwrap()
}

/// PZ order of a ball equals the diagonal-congruence order, and the
/// congruence order stabilizes exactly the ball.
fn ball_theorem(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    for p in [2u64, 3] {
        for d in [2usize, 3] {
            for r in [1i64, 2] {
                let c = ctx(p);
                let l = Lattice::standard(c, d);
                let center = class_of(&l);
                let b = ball(&center, r, cap).expect("ball within cap");
                let pz = pz_order(&b).expect("nonempty ball");
                let explicit = ball_order(&l, r);
                checks.expect(pz.carrier() == explicit.carrier(), || {
                    format!("pz(ball) != congruence order at p={p} d={d} r={r}")
                });
                let stable = invariant_classes(&explicit, cap).expect("within cap");
                checks.expect(stable == b, || {
                    format!("Q(ball order) != ball at p={p} d={d} r={r}")
                });
            }
        }
    }
    checks.finish("ball-theorem")
}

/// Diagonal classes of the widened set match the widened polytrope.
fn apartment_slice_suite(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0xA11CE);
    for _ in 0..50 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let d = [2usize, 3][rng.gen_range(0..2)];
        let max = if d == 2 { 5 } else { 3 };
        let m = random_exponent_matrix(&mut rng, d, max);
        let r = rng.gen_range(0..=2i64);
        let c = ctx(p);
        let apartment = Apartment::standard(c, d);
        let fat = ball_around_set(&polytrope_class_set(&apartment, &m), r, cap)
            .expect("bolytrope within cap");
        let mut slice: Vec<Vec<i64>> = fat
            .iter()
            .filter_map(|cl| apartment.exponent_vector(cl).ok())
            .collect();
        slice.sort();
        slice.dedup();
        let expected = polytrope_points(&m.widen(r));
        checks.expect(slice == expected, || {
            format!("slice mismatch at p={p} d={d} r={r} M={:?}", m.rows())
        });
    }
    checks.finish("apartment-slice")
}

/// Bolytrope orders are the PZ orders of their bolytropes and stabilize
/// exactly the bolytrope.
fn bolytrope_theorem(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0xB01);
    let mut instances = Vec::new();
    for i in 0..18 {
        let (d, max) = if i % 5 < 3 { (2usize, 6i64) } else { (3, 3) };
        let p = [2u64, 3][rng.gen_range(0..2)];
        let r = rng.gen_range(0..=2i64);
        let m = random_exponent_matrix(&mut rng, d, max);
        instances.push((p, d, r, m));
    }
    // two wide three-dimensional instances at the sampling envelope
    instances.push((2, 3, 1, random_exponent_matrix(&mut rng, 3, 6)));
    instances.push((3, 3, 1, random_exponent_matrix(&mut rng, 3, 4)));
    for (p, d, r, m) in instances {
        let c = ctx(p);
        let apartment = Apartment::standard(c, d);
        let fat = bolytrope(&apartment, &m, r, cap).expect("bolytrope within cap");
        let order = bolytrope_order(&apartment, &m, r);
        let pz = pz_order(&fat).expect("nonempty");
        checks.expect(pz.carrier() == order.carrier(), || {
            format!(
                "pz(bolytrope) != bolytrope order at p={p} r={r} M={:?}",
                m.rows()
            )
        });
        let stable = invariant_classes(&order, cap).expect("within cap");
        checks.expect(stable == fat, || {
            format!(
                "Q(bolytrope order) != bolytrope at p={p} r={r} M={:?}",
                m.rows()
            )
        });
    }
    checks.finish("bolytrope-theorem")
}

/// Radical idealizer chains of ball and bolytrope orders descend through the
/// radii term by term, and the central polytrope is recovered.
fn radical_chains(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    for p in [2u64, 3] {
        for d in [2usize, 3] {
            for r in [1i64, 2] {
                let c = ctx(p);
                let l = Lattice::standard(c, d);
                let chain = radical_idealizer_chain(&ball_order(&l, r)).expect("chain");
                checks.expect(chain.len() == (r + 1) as usize, || {
                    format!("ball chain length at p={p} d={d} r={r}")
                });
                for (i, term) in chain.iter().enumerate() {
                    let expected = ball_order(&l, r - i as i64);
                    checks.expect(term.carrier() == expected.carrier(), || {
                        format!("ball chain term {i} at p={p} d={d} r={r}")
                    });
                }
                let central =
                    central_polytrope(&ball_order(&l, r), &[], cap).expect("frame search");
                checks.expect(
                    central.index == r as usize && central.raw == ExponentMatrix::zero(d),
                    || format!("ball central polytrope at p={p} d={d} r={r}"),
                );
            }
        }
    }
    let fixtures: Vec<(u64, Vec<Vec<i64>>, i64)> = vec![
        (2, vec![vec![0, 3], vec![1, 0]], 1),
        (3, vec![vec![0, 2], vec![0, 0]], 2),
        (2, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], 1),
        (3, vec![vec![0, 2, 2], vec![1, 0, 1], vec![1, 2, 0]], 1),
    ];
    for (p, rows, r) in fixtures {
        let c = ctx(p);
        let m = ExponentMatrix::from_rows(&rows).unwrap();
        let d = m.d();
        let apartment = Apartment::standard(c, d);
        let order = bolytrope_order(&apartment, &m, r);
        let chain = radical_idealizer_chain(&order).expect("chain");
        checks.expect(chain.len() >= (r + 1) as usize, || {
            format!("bolytrope chain too short at p={p} r={r}")
        });
        for i in 0..=r {
            let expected = bolytrope_order(&apartment, &m, r - i);
            checks.expect(
                chain
                    .get(i as usize)
                    .is_some_and(|t| t.carrier() == expected.carrier()),
                || format!("bolytrope chain term {i} at p={p} r={r} M={rows:?}"),
            );
        }
        let expected_graduated = graduated_order(&apartment, &m);
        checks.expect(
            chain
                .get(r as usize)
                .is_some_and(|t| t.carrier() == expected_graduated.carrier()),
            || format!("chain term r is not the graduated order at p={p} r={r}"),
        );
        let central = central_polytrope(&order, &[], cap).expect("frame search");
        checks.expect(central.index == r as usize, || {
            format!("central polytrope index at p={p} r={r}")
        });
        checks.expect(central.matrix == normalize_base_point(&m), || {
            format!("central polytrope matrix at p={p} r={r}")
        });
        let rebuilt = graduated_order(&central.frame, &central.raw);
        checks.expect(rebuilt.carrier() == chain[central.index].carrier(), || {
            format!("central polytrope rebuild at p={p} r={r}")
        });
    }
    checks.finish("radical-chains")
}

/// The worked 3 x 3 example: a strictly descending chain of polytropes inside
/// the standard apartment ending in a simplex.
fn fig1_chain(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let c = ctx(2);
    let m = ExponentMatrix::from_rows(&[vec![0, 7, 9], vec![12, 0, 8], vec![5, 6, 0]]).unwrap();
    let apartment = Apartment::standard(c, 3);
    let order = graduated_order(&apartment, &m);
    let chain = radical_idealizer_chain(&order).expect("chain");
    let sets: Vec<ClassSet> = chain
        .iter()
        .map(|t| invariant_classes(t, cap).expect("within cap"))
        .collect();
    checks.expect(sets[0] == polytrope_class_set(&apartment, &m), || {
        "Q of the graduated order is not its polytrope".into()
    });
    for (i, w) in sets.windows(2).enumerate() {
        checks.expect(w[1].is_subset_of(&w[0]) && w[1].len() < w[0].len(), || {
            format!("chain sets not strictly descending at step {i}")
        });
    }
    for (i, s) in sets.iter().enumerate() {
        checks.expect(
            s.iter().all(|cl| apartment.exponent_vector(cl).is_ok()),
            || format!("chain set {i} leaves the standard apartment"),
        );
    }
    checks.expect(is_simplex(sets.last().unwrap()), || {
        "terminal invariant set is not a simplex".into()
    });
    checks.finish("fig1-chain")
}

/// Random star configurations satisfy the defining conditions and generate
/// the ball order.
fn star_configurations() -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0x57A12);
    for _ in 0..50 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let d = [2usize, 3][rng.gen_range(0..2)];
        let r = rng.gen_range(0..=2i64);
        let c = ctx(p);
        let basis = random_basis(&mut rng, c, d);
        let star = star_configuration(c, &basis, r).expect("invertible basis");
        checks.expect(star_conditions_hold(&basis, r, &star), || {
            format!("star conditions fail at p={p} d={d} r={r}")
        });
        let center = Lattice::canonicalize(c, &basis).unwrap();
        let pz = pz_order(&star.classes).expect("nonempty");
        checks.expect(pz.carrier() == ball_order(&center, r).carrier(), || {
            format!("pz(star) != ball order at p={p} d={d} r={r}")
        });
    }
    checks.finish("star-configurations")
}

/// The four explicit lattices generating the ball order in dimension four,
/// and the exact degree three at radius one.
fn d4_degree(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let c = ctx(2);
    for r in [1i64, 2] {
        let pr = 1i64 << r;
        let grids: [[[i64; 4]; 4]; 4] = [
            [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, pr, 0], [0, 0, 0, pr]],
            [[pr, 0, 0, 0], [0, pr, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, pr, 0], [1, 0, 0, pr]],
            [[pr, 0, 0, 0], [0, 1, 0, 0], [0, 0, pr, 0], [0, 1, 0, pr]],
        ];
        let classes: ClassSet = grids
            .iter()
            .map(|g| {
                let m = RationalMatrix::from_fn(4, 4, |i, j| scalar_int(g[i][j]));
                class_of(&Lattice::canonicalize(c, &m).expect("invertible"))
            })
            .collect();
        checks.expect(classes.len() == 4, || {
            format!("fixture classes collide at r={r}")
        });
        let pz = pz_order(&classes).expect("nonempty");
        let explicit = ball_order(&Lattice::standard(c, 4), r);
        checks.expect(pz.carrier() == explicit.carrier(), || {
            format!("pz of the four lattices != ball order at r={r}")
        });
    }
    let deg = degree_exact_small(&ball_order(&Lattice::standard(c, 4), 1), 3, cap)
        .expect("degree search");
    checks.expect(deg == Some(3), || {
        format!("degree of the radius-1 ball order: {deg:?}")
    });
    checks.finish("d4-degree")
}

/// Closed orders in the tree round-trip through (r, m, frame), plus the
/// worked tree fixture with center [[0, 7], [0, 0]].
fn d2_classification(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0xD2);
    for _ in 0..100 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let c = ctx(p);
        let k = rng.gen_range(2..=5usize);
        let classes: ClassSet = (0..k)
            .map(|_| random_integral_class(&mut rng, c, 2, 6))
            .collect();
        let order = pz_order(&classes).expect("nonempty");
        let canonical = d2_canonical_form(&order, cap).expect("closed by construction");
        let m = ExponentMatrix::from_rows(&[vec![0, canonical.m], vec![0, 0]]).unwrap();
        let rebuilt = bolytrope_order(&canonical.frame, &m, canonical.r);
        checks.expect(rebuilt.carrier() == order.carrier(), || {
            format!(
                "round trip failed at p={p} (r={}, m={})",
                canonical.r, canonical.m
            )
        });
    }
    // worked fixture: hull of (0,1) and (8,0) plus one off-apartment neighbor
    // of an interior point
    let c = ctx(2);
    let apartment = Apartment::standard(c, 2);
    let l1 = apartment.class_at(&[0, 1]);
    let l2 = apartment.class_at(&[8, 0]);
    let interior = apartment.class_at(&[4, 0]);
    let off: Vec<_> = crate::building::neighbors(&interior)
        .iter()
        .filter(|n| apartment.exponent_vector(n).is_err())
        .cloned()
        .collect();
    checks.expect(off.len() == 1, || {
        "expected one off-apartment neighbor at p=2".into()
    });
    let fixture = ClassSet::new(vec![l1, l2, off[0].clone()]);
    let order = pz_order(&fixture).expect("nonempty");
    let canonical = d2_canonical_form(&order, cap).expect("closed by construction");
    checks.expect((canonical.r, canonical.m) == (1, 7), || {
        format!(
            "worked fixture gave (r, m) = ({}, {})",
            canonical.r, canonical.m
        )
    });
    checks.finish("d2-classification")
}

/// The diagonal-congruence suborder of the hereditary order is not closed and
/// closes to the graduated order.
fn non_closed_example(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    for p in [2u64, 3] {
        let c = ctx(p);
        let ps = c.uniformizer();
        let gens: Vec<Vec<Scalar>> = vec![
            vec_col_major(&RationalMatrix::identity(2)),
            vec_col_major(&RationalMatrix::unit(2, 0, 0).scale(&ps)),
            vec_col_major(&RationalMatrix::unit(2, 0, 1)),
            vec_col_major(&RationalMatrix::unit(2, 1, 0).scale(&ps)),
        ];
        let carrier = Lattice::from_generators(c, 4, gens).unwrap();
        let order = Order::try_new(2, carrier).expect("the suborder is a ring");
        checks.expect(!is_closed(&order, cap).expect("within cap"), || {
            format!("order unexpectedly closed at p={p}")
        });
        let closure = crate::order::closure(&order, cap).expect("within cap");
        let graduated = graduated_order(
            &Apartment::standard(c, 2),
            &ExponentMatrix::from_rows(&[vec![0, 0], vec![1, 0]]).unwrap(),
        );
        checks.expect(closure.carrier() == graduated.carrier(), || {
            format!("closure mismatch at p={p}")
        });
    }
    checks.finish("non-closed-example")
}

/// Metric axioms on random triples and geodesics of the right length.
fn metric_geodesics() -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0x3E0);
    for _ in 0..500 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let d = [2usize, 3][rng.gen_range(0..2)];
        let c = ctx(p);
        let x = random_class(&mut rng, c, d, 3);
        let y = random_class(&mut rng, c, d, 3);
        let z = random_class(&mut rng, c, d, 3);
        checks.expect(x.distance(&x) == 0, || "distance identity".into());
        let xy = x.distance(&y);
        checks.expect(xy == y.distance(&x), || "distance symmetry".into());
        checks.expect((xy == 0) == (x == y), || "distance separates".into());
        checks.expect(xy + y.distance(&z) >= x.distance(&z), || {
            "triangle inequality".into()
        });
    }
    let mut done = 0;
    while done < 200 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let d = [2usize, 3][rng.gen_range(0..2)];
        let c = ctx(p);
        let x = random_class(&mut rng, c, d, 2);
        let y = random_class(&mut rng, c, d, 2);
        let dist = x.distance(&y);
        if dist > 6 {
            continue;
        }
        done += 1;
        let path = geodesic(&x, &y);
        checks.expect(path.len() as i64 == dist + 1, || {
            format!("geodesic length {} at distance {dist}", path.len())
        });
        checks.expect(path.first() == Some(&x) && path.last() == Some(&y), || {
            "geodesic endpoints".into()
        });
        checks.expect(path.windows(2).all(|w| w[0].distance(&w[1]) == 1), || {
            "geodesic steps".into()
        });
    }
    checks.finish("metric-geodesics")
}

/// The d + 1 bolystar generators cut out the bolytrope order.
fn bolystar_suite(cap: usize) -> SuiteReport {
    let mut checks = Checks::new();
    let mut rng = StdRng::seed_from_u64(0xB057);
    for i in 0..20 {
        let (d, max) = if i % 2 == 0 { (2usize, 5i64) } else { (3, 3) };
        let p = [2u64, 3][rng.gen_range(0..2)];
        let r = rng.gen_range(0..=2i64);
        let m = random_exponent_matrix(&mut rng, d, max);
        let c = ctx(p);
        let apartment = Apartment::standard(c, d);
        let gens = bolystar_generators(&apartment, &m, r);
        checks.expect(gens.len() <= d + 1, || {
            format!("too many generators at p={p} r={r}")
        });
        let pz = pz_order(&gens).expect("nonempty");
        let order = bolytrope_order(&apartment, &m, r);
        checks.expect(pz.carrier() == order.carrier(), || {
            format!(
                "pz(bolystar) != bolytrope order at p={p} r={r} M={:?}",
                m.rows()
            )
        });
    }
    let _ = cap;
    checks.finish("bolystar-generators")
}
