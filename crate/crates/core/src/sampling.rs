//! Seeded random generators for property tests and verification suites.
//! Everything here is deterministic given the RNG state.

use rand::rngs::StdRng;
use rand::Rng;

use crate::building::{class_of, Apartment, LatticeClass};
use crate::lattice::Lattice;
use crate::matrix::RationalMatrix;
use crate::polytrope::{triangle_closure, ExponentMatrix};
use crate::valuation::{scalar_int, PAdicContext, Scalar};

/// A random class from a random invertible matrix with entries of the form
/// c * p^k, c small, k in [-val_spread, val_spread].
pub fn random_class(
    rng: &mut StdRng,
    ctx: PAdicContext,
    d: usize,
    val_spread: i64,
) -> LatticeClass {
    loop {
        let m = RationalMatrix::from_fn(d, d, |_, _| {
            if rng.gen_ratio(1, 4) {
                return Scalar::from_integer(0.into());
            }
            let c = rng.gen_range(1..=4i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let k = rng.gen_range(-val_spread..=val_spread);
            scalar_int(c) * ctx.p_pow(k)
        });
        if let Ok(l) = Lattice::canonicalize(ctx, &m) {
            return class_of(&l);
        }
    }
}

/// A random class given by a canonical triangular basis with diagonal
/// exponents in [0, max_exp].
pub fn random_integral_class(
    rng: &mut StdRng,
    ctx: PAdicContext,
    d: usize,
    max_exp: i64,
) -> LatticeClass {
    let exps: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=max_exp)).collect();
    let p = ctx.prime() as i64;
    let m = RationalMatrix::from_fn(d, d, |i, j| {
        if i == j {
            ctx.p_pow(exps[i])
        } else if i > j {
            let bound = p.pow(exps[i].min(8) as u32);
            scalar_int(rng.gen_range(0..bound.max(1)))
        } else {
            Scalar::from_integer(0.into())
        }
    });
    class_of(&Lattice::canonicalize(ctx, &m).expect("triangular basis invertible"))
}

/// A random invertible basis matrix with small mixed-valuation entries.
pub fn random_basis(rng: &mut StdRng, ctx: PAdicContext, d: usize) -> RationalMatrix {
    loop {
        let m = RationalMatrix::from_fn(d, d, |_, _| {
            if rng.gen_ratio(1, 3) {
                return Scalar::from_integer(0.into());
            }
            let c = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let k = rng.gen_range(-1..=1);
            scalar_int(c) * ctx.p_pow(k)
        });
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// A random exponent matrix with nonnegative entries bounded by max_entry,
/// pushed into the polytrope region by the min-plus closure.
pub fn random_exponent_matrix(rng: &mut StdRng, d: usize, max_entry: i64) -> ExponentMatrix {
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        0
                    } else {
                        rng.gen_range(0..=max_entry)
                    }
                })
                .collect()
        })
        .collect();
    triangle_closure(&rows).expect("nonnegative entries have no negative cycles")
}

/// A product of random elementary column operations over Z_(p): adds with
/// integral coefficients, swaps, and unit scalings.
pub fn random_unimodular(
    rng: &mut StdRng,
    ctx: PAdicContext,
    d: usize,
    steps: usize,
) -> RationalMatrix {
    let p = ctx.prime() as i64;
    let mut m = RationalMatrix::identity(d);
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..d);
                let mut j = rng.gen_range(0..d);
                if d > 1 {
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    let q = scalar_int(rng.gen_range(-3..=3));
                    for r in 0..d {
                        let t = m.at(r, j) * &q;
                        *m.at_mut(r, i) += t;
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..d);
                let j = rng.gen_range(0..d);
                if i != j {
                    for r in 0..d {
                        let x = m.at(r, i).clone();
                        *m.at_mut(r, i) = m.at(r, j).clone();
                        *m.at_mut(r, j) = x;
                    }
                }
            }
            _ => {
                let i = rng.gen_range(0..d);
                let mut c = rng.gen_range(1..=5i64);
                while c % p == 0 {
                    c += 1;
                }
                let f = scalar_int(c);
                for r in 0..d {
                    let t = m.at(r, i) * &f;
                    *m.at_mut(r, i) = t;
                }
            }
        }
    }
    m
}

/// A random apartment whose frame is a random invertible basis.
pub fn random_apartment(rng: &mut StdRng, ctx: PAdicContext, d: usize) -> Apartment {
    Apartment::new(ctx, random_basis(rng, ctx, d)).expect("basis invertible")
}
