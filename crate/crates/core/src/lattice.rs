//! Full-rank lattices over Z localized at p, held in a canonical column-style
//! Hermite form: lower-triangular basis, diagonal entries exactly p^(a_i), and
//! each below-diagonal entry in row i the canonical representative of its
//! class modulo p^(a_i). Equality of lattices is equality of bases.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::valuation::{PAdicContext, Scalar, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lattice {
    ctx: PAdicContext,
    basis: RationalMatrix,
}

/// Incremental column Hermite reduction: columns are inserted one at a time
/// and reduced against the pivots found so far. A column carrying a smaller
/// valuation at a pivot row displaces the old pivot, which is then fed back in.
struct HermiteAccumulator {
    ctx: PAdicContext,
    dim: usize,
    pivots: Vec<Option<Vec<Scalar>>>,
    exps: Vec<i64>,
}

impl HermiteAccumulator {
    fn new(ctx: PAdicContext, dim: usize) -> Self {
        HermiteAccumulator {
            ctx,
            dim,
            pivots: vec![None; dim],
            exps: vec![0; dim],
        }
    }

    fn insert(&mut self, mut col: Vec<Scalar>) {
        debug_assert_eq!(col.len(), self.dim);
        let mut i = 0;
        while i < self.dim {
            if col[i].is_zero() {
                i += 1;
                continue;
            }
            let v = self.ctx.valuation(&col[i]).finite().expect("nonzero entry");
            match &self.pivots[i] {
                None => {
                    normalize_at(&self.ctx, &mut col, i, v);
                    self.pivots[i] = Some(col);
                    self.exps[i] = v;
                    return;
                }
                Some(_) => {
                    if v < self.exps[i] {
                        normalize_at(&self.ctx, &mut col, i, v);
                        let old = self.pivots[i].replace(col).unwrap();
                        let old_exp = self.exps[i];
                        self.exps[i] = v;
                        col = old;
                        debug_assert_eq!(self.ctx.valuation(&col[i]), Valuation::Finite(old_exp));
                    }
                    let q = &col[i] / self.ctx.p_pow(self.exps[i]);
                    let pivot = self.pivots[i].as_ref().unwrap();
                    for r in i..self.dim {
                        if !pivot[r].is_zero() {
                            let t = &q * &pivot[r];
                            col[r] -= t;
                        }
                    }
                    debug_assert!(col[i].is_zero());
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    /// Final reduction of below-diagonal entries into canonical residues.
    fn finish(self) -> Result<RationalMatrix> {
        let d = self.dim;
        if self.rank() < d {
            return Err(Error::Singular("generators do not span full rank".into()));
        }
        let ctx = self.ctx;
        let mut cols: Vec<Vec<Scalar>> = self.pivots.into_iter().map(|p| p.unwrap()).collect();
        for i in 1..d {
            let a = self.exps[i];
            for j in 0..i {
                let rep = ctx.reduce_class(&cols[j][i], a);
                if cols[j][i] == rep {
                    continue;
                }
                let q = (&cols[j][i] - &rep) / ctx.p_pow(a);
                for r in i..d {
                    let t = &q * &cols[i][r];
                    cols[j][r] -= t;
                }
                debug_assert_eq!(cols[j][i], rep);
            }
        }
        Ok(RationalMatrix::from_fn(d, d, |i, j| cols[j][i].clone()))
    }
}

fn normalize_at(ctx: &PAdicContext, col: &mut [Scalar], i: usize, v: i64) {
    let unit = &col[i] / ctx.p_pow(v);
    for entry in col.iter_mut().skip(i) {
        if !entry.is_zero() {
            *entry /= &unit;
        }
    }
}

impl Lattice {
    /// Canonical lattice spanned by the given generator columns.
    pub fn from_generators(
        ctx: PAdicContext,
        dim: usize,
        cols: impl IntoIterator<Item = Vec<Scalar>>,
    ) -> Result<Self> {
        let mut acc = HermiteAccumulator::new(ctx, dim);
        for c in cols {
            if c.len() != dim {
                return Err(Error::Dimension("generator of wrong length".into()));
            }
            acc.insert(c);
        }
        Ok(Lattice {
            ctx,
            basis: acc.finish()?,
        })
    }

    /// Canonical form of the lattice spanned by the columns of a square
    /// invertible matrix.
    pub fn canonicalize(ctx: PAdicContext, basis: &RationalMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::Dimension("lattice basis must be square".into()));
        }
        Self::from_generators(ctx, basis.rows(), basis.columns())
    }

    /// The standard lattice Z_(p)^d.
    pub fn standard(ctx: PAdicContext, d: usize) -> Self {
        Lattice {
            ctx,
            basis: RationalMatrix::identity(d),
        }
    }

    pub fn ctx(&self) -> PAdicContext {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    /// Exponents a_i of the diagonal entries p^(a_i).
    pub fn diag_exponents(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|i| {
                self.ctx
                    .valuation(self.basis.at(i, i))
                    .finite()
                    .expect("diagonal entries are nonzero")
            })
            .collect()
    }

    /// Valuation of the basis determinant (sum of diagonal exponents).
    pub fn det_valuation(&self) -> i64 {
        self.diag_exponents().iter().sum()
    }

    /// Coordinates of v in the basis (forward substitution).
    pub fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        assert_eq!(v.len(), d);
        let mut x = vec![Scalar::zero(); d];
        for i in 0..d {
            let mut s = v[i].clone();
            for j in 0..i {
                if !self.basis.at(i, j).is_zero() && !x[j].is_zero() {
                    let t = self.basis.at(i, j) * &x[j];
                    s -= t;
                }
            }
            x[i] = s / self.basis.at(i, i);
        }
        x
    }

    /// Membership: all basis coordinates have nonnegative valuation.
    pub fn member(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).iter().all(|c| self.ctx.is_integral(c))
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        (0..other.dim()).all(|j| self.member(&other.basis.column(j)))
    }

    /// Module-theoretic join.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim(), other.dim());
        let cols = self
            .basis
            .columns()
            .into_iter()
            .chain(other.basis.columns());
        Lattice::from_generators(self.ctx, self.dim(), cols).expect("sum of full-rank lattices")
    }

    /// Dual with respect to the standard pairing: inverse-transpose basis.
    pub fn dual(&self) -> Lattice {
        let b = self
            .basis
            .transpose()
            .inverse()
            .expect("canonical bases are invertible");
        Lattice::canonicalize(self.ctx, &b).expect("dual basis is invertible")
    }

    /// Module-theoretic meet, via duality.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// The lattice scaled by p^k. Canonical forms scale entrywise.
    pub fn scale_p(&self, k: i64) -> Lattice {
        if k == 0 {
            return self.clone();
        }
        let f = self.ctx.p_pow(k);
        Lattice {
            ctx: self.ctx,
            basis: self.basis.scale(&f),
        }
    }
}

/// Exponents of the p-elementary divisors of a square invertible matrix,
/// in nondecreasing order.
pub fn smith_valuations(ctx: PAdicContext, a: &RationalMatrix) -> Result<Vec<i64>> {
    Ok(smith_with_frame_ops(ctx, a, None)?.0)
}

/// Smith decomposition tracking the inverse of the row transform. Used to
/// produce compatible bases: if `a = B1^-1 B2` then `B1 * u_inv` is a frame
/// diagonalizing both lattices.
fn smith_with_frame_ops(
    ctx: PAdicContext,
    a: &RationalMatrix,
    mut u_inv: Option<&mut RationalMatrix>,
) -> Result<(Vec<i64>, ())> {
    if !a.is_square() {
        return Err(Error::Dimension("smith form of non-square matrix".into()));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut exps = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Valuation::Finite(v) = ctx.valuation(m.at(i, j)) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, pi, pj) =
            best.ok_or_else(|| Error::Singular("smith form of singular matrix".into()))?;
        if pi != k {
            for j in 0..n {
                let x = m.at(pi, j).clone();
                *m.at_mut(pi, j) = m.at(k, j).clone();
                *m.at_mut(k, j) = x;
            }
            if let Some(ui) = u_inv.as_deref_mut() {
                for r in 0..n {
                    let x = ui.at(r, pi).clone();
                    *ui.at_mut(r, pi) = ui.at(r, k).clone();
                    *ui.at_mut(r, k) = x;
                }
            }
        }
        if pj != k {
            for i in 0..n {
                let x = m.at(i, pj).clone();
                *m.at_mut(i, pj) = m.at(i, k).clone();
                *m.at_mut(i, k) = x;
            }
        }
        // scale row k by a unit so the pivot is exactly p^v
        let unit = m.at(k, k) / ctx.p_pow(v);
        if !unit.is_one() {
            for j in k..n {
                if !m.at(k, j).is_zero() {
                    *m.at_mut(k, j) /= &unit;
                }
            }
            if let Some(ui) = u_inv.as_deref_mut() {
                for r in 0..n {
                    if !ui.at(r, k).is_zero() {
                        *ui.at_mut(r, k) *= &unit;
                    }
                }
            }
        }
        let pivot = ctx.p_pow(v);
        for r in k + 1..n {
            if m.at(r, k).is_zero() {
                continue;
            }
            let f = m.at(r, k) / &pivot;
            for j in k..n {
                let t = m.at(k, j) * &f;
                *m.at_mut(r, j) -= t;
            }
            if let Some(ui) = u_inv.as_deref_mut() {
                for row in 0..n {
                    let t = ui.at(row, r) * &f;
                    *ui.at_mut(row, k) += t;
                }
            }
        }
        for c in k + 1..n {
            if m.at(k, c).is_zero() {
                continue;
            }
            let g = m.at(k, c) / &pivot;
            for i in k..n {
                let t = m.at(i, k) * &g;
                *m.at_mut(i, c) -= t;
            }
        }
        exps.push(v);
    }
    // pivots were chosen with globally minimal valuation, so exps ascend;
    // the frame variant additionally needs the matching column order
    if let Some(ui) = u_inv {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| exps[i]);
        let sorted: Vec<i64> = order.iter().map(|&i| exps[i]).collect();
        let permuted = RationalMatrix::from_fn(n, n, |r, c| ui.at(r, order[c]).clone());
        *ui = permuted;
        exps = sorted;
    } else {
        exps.sort_unstable();
    }
    Ok((exps, ()))
}

/// Building distance between the homothety classes of two lattices:
/// max minus min of the elementary divisor exponents of the basis change.
pub fn class_distance(l1: &Lattice, l2: &Lattice) -> i64 {
    assert_eq!(l1.dim(), l2.dim());
    let t = l1
        .basis()
        .inverse()
        .expect("canonical basis invertible")
        .mul(l2.basis());
    let s = smith_valuations(l1.ctx(), &t).expect("basis change invertible");
    s[s.len() - 1] - s[0]
}

/// A common frame for two lattices: returns `(frame, u, v)` with
/// `L1 = L_u` and `L2 = L_v` in that frame (u is always zero, v ascending).
pub fn compatible_bases(
    l1: &Lattice,
    l2: &Lattice,
) -> Result<(RationalMatrix, Vec<i64>, Vec<i64>)> {
    if l1.dim() != l2.dim() {
        return Err(Error::Dimension(
            "compatible bases need equal dimensions".into(),
        ));
    }
    let d = l1.dim();
    let t = l1.basis().inverse()?.mul(l2.basis());
    let mut u_inv = RationalMatrix::identity(d);
    let (v, ()) = smith_with_frame_ops(l1.ctx(), &t, Some(&mut u_inv))?;
    let frame = l1.basis().mul(&u_inv);
    let u = vec![0i64; d];
    // reconstruction check: both lattices must come back exactly
    let rebuilt1 = lattice_in_frame(l1.ctx(), &frame, &u)?;
    let rebuilt2 = lattice_in_frame(l1.ctx(), &frame, &v)?;
    if &rebuilt1 != l1 || &rebuilt2 != l2 {
        return Err(Error::Inconsistency(
            "compatible bases reconstruction".into(),
        ));
    }
    Ok((frame, u, v))
}

/// The lattice spanned by p^(u_i) times the i-th frame column.
pub fn lattice_in_frame(ctx: PAdicContext, frame: &RationalMatrix, u: &[i64]) -> Result<Lattice> {
    let d = frame.rows();
    if u.len() != d {
        return Err(Error::Dimension("exponent vector of wrong length".into()));
    }
    let cols = (0..d).map(|j| {
        let f = ctx.p_pow(u[j]);
        frame.column(j).into_iter().map(|x| x * &f).collect()
    });
    Lattice::from_generators(ctx, d, cols)
}

/// The transporter `{X : X N <= M}` as a lattice of flattened d x d matrices.
pub fn transporter(m: &Lattice, n: &Lattice) -> Lattice {
    assert_eq!(m.dim(), n.dim());
    let basis = n
        .basis()
        .inverse()
        .expect("canonical basis invertible")
        .transpose()
        .kron(m.basis());
    Lattice::canonicalize(m.ctx(), &basis).expect("transporter basis invertible")
}

/// The lattice `{ y : f . y  in Z_(p) for every functional f }`, i.e. the dual
/// of the span of the functionals. Fails if the functionals do not span.
pub fn dual_of_span(
    ctx: PAdicContext,
    dim: usize,
    functionals: impl IntoIterator<Item = Vec<Scalar>>,
) -> Result<Lattice> {
    let span = Lattice::from_generators(ctx, dim, functionals)?;
    Ok(span.dual())
}
