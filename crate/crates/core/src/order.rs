//! Orders in the algebra of d x d matrices over the base field: endomorphism
//! and Plesken-Zassenhaus orders, ring validation, the Jacobson radical via
//! residue-field linear algebra, idealizers and the radical idealizer chain,
//! closure, and exact degree search at small sizes.

use num_traits::Zero;

use crate::building::{invariant_classes, ClassSet, LatticeClass};
use crate::error::{Error, Result};
use crate::fp::{fp_add, fp_mul, fp_sub, FpMatrix};
use crate::lattice::{dual_of_span, transporter, Lattice};
use crate::matrix::{unvec_col_major, vec_col_major, RationalMatrix};
use crate::valuation::{PAdicContext, Scalar};

/// A full-rank lattice of d x d matrices that is a ring with identity,
/// stored flattened column-major as a lattice of dimension d^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    d: usize,
    carrier: Lattice,
    mats: Vec<RationalMatrix>,
}

impl Order {
    /// Validates the ring axioms: identity membership and closure of basis
    /// products.
    pub fn try_new(d: usize, carrier: Lattice) -> Result<Self> {
        if carrier.dim() != d * d {
            return Err(Error::Dimension("carrier must have dimension d^2".into()));
        }
        let order = Self::from_carrier_trusted(d, carrier);
        if let Some(why) = order.ring_defect() {
            return Err(Error::NotAnOrder(why));
        }
        Ok(order)
    }

    /// For carriers that are orders by construction (intersections of orders,
    /// idealizers, conjugates). Skips revalidation.
    pub(crate) fn from_carrier_trusted(d: usize, carrier: Lattice) -> Self {
        let mats = carrier
            .basis()
            .columns()
            .into_iter()
            .map(|c| unvec_col_major(d, &c))
            .collect();
        Order { d, carrier, mats }
    }

    pub fn ctx(&self) -> PAdicContext {
        self.carrier.ctx()
    }

    /// Size d of the matrices; the carrier lattice has dimension d^2.
    pub fn matrix_dim(&self) -> usize {
        self.d
    }

    pub fn carrier(&self) -> &Lattice {
        &self.carrier
    }

    pub fn basis_matrices(&self) -> &[RationalMatrix] {
        &self.mats
    }

    pub fn contains_matrix(&self, m: &RationalMatrix) -> bool {
        self.carrier.member(&vec_col_major(m))
    }

    pub fn contains(&self, other: &Order) -> bool {
        self.carrier.contains(&other.carrier)
    }

    /// None when the carrier is a ring with identity, otherwise a description
    /// of the failure.
    fn ring_defect(&self) -> Option<String> {
        if !self.contains_matrix(&RationalMatrix::identity(self.d)) {
            return Some("identity not contained".into());
        }
        for (i, a) in self.mats.iter().enumerate() {
            for (j, b) in self.mats.iter().enumerate() {
                if !self.contains_matrix(&a.mul(b)) {
                    return Some(format!("basis product {i} * {j} escapes the lattice"));
                }
            }
        }
        None
    }

    /// Conjugate g^-1 * self * g as an order.
    pub fn conjugate(&self, g: &RationalMatrix) -> Result<Order> {
        let g_inv = g.inverse()?;
        let cols = self
            .mats
            .iter()
            .map(|m| vec_col_major(&g_inv.mul(m).mul(g)));
        let carrier = Lattice::from_generators(self.ctx(), self.d * self.d, cols)?;
        Ok(Order::from_carrier_trusted(self.d, carrier))
    }
}

/// Whether a lattice of flattened d x d matrices is multiplicatively closed
/// and contains the identity.
pub fn is_order_lattice(d: usize, lattice: &Lattice) -> bool {
    if lattice.dim() != d * d {
        return false;
    }
    Order::from_carrier_trusted(d, lattice.clone())
        .ring_defect()
        .is_none()
}

/// The endomorphism order of a lattice; a maximal order.
pub fn endomorphism_order(l: &Lattice) -> Order {
    let carrier = transporter(l, l);
    Order::from_carrier_trusted(l.dim(), carrier)
}

/// Columns spanning the dual of End(L) under the coordinate pairing:
/// kron(B, B^-T).
fn dual_end_columns(class: &LatticeClass) -> Vec<Vec<Scalar>> {
    let b = class.rep().basis();
    let b_inv_t = b.inverse().expect("canonical basis invertible").transpose();
    b.kron(&b_inv_t).columns()
}

/// The Plesken-Zassenhaus order of a set of classes: the intersection of
/// their endomorphism orders, computed as the dual of the sum of duals.
pub fn pz_order(set: &ClassSet) -> Result<Order> {
    let carrier = pz_carrier(set)?;
    let d = set.get(0).dim();
    Order::try_new(d, carrier)
}

/// Carrier lattice of the PZ order, without ring validation. Used in the
/// degree search where only lattice equality matters.
pub(crate) fn pz_carrier(set: &ClassSet) -> Result<Lattice> {
    if set.is_empty() {
        return Err(Error::Domain("PZ order of an empty set".into()));
    }
    let first = set.get(0);
    let ctx = first.ctx();
    let d = first.dim();
    if set.iter().any(|c| c.ctx() != ctx || c.dim() != d) {
        return Err(Error::Dimension(
            "classes must share the prime and the dimension".into(),
        ));
    }
    let cols = set.iter().flat_map(dual_end_columns);
    Ok(Lattice::from_generators(ctx, d * d, cols)?.dual())
}

/// The quotient of an order by p times itself: a finite-dimensional algebra
/// over the residue field, stored by structure constants.
#[derive(Debug, Clone)]
pub struct ResidueAlgebra {
    p: u64,
    n: usize,
    /// consts[(i*n + j)*n + k] = coefficient of basis k in (basis i)(basis j)
    consts: Vec<u64>,
    identity: Vec<u64>,
}

impl ResidueAlgebra {
    pub fn new(p: u64, n: usize, consts: Vec<u64>, identity: Vec<u64>) -> Result<Self> {
        if consts.len() != n * n * n || identity.len() != n {
            return Err(Error::Dimension("structure constant table size".into()));
        }
        let a = ResidueAlgebra {
            p,
            n,
            consts,
            identity,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn identity_coords(&self) -> &[u64] {
        &self.identity
    }

    fn const_at(&self, i: usize, j: usize, k: usize) -> u64 {
        self.consts[(i * self.n + j) * self.n + k]
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.n;
        let mut out = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let f = fp_mul(x[i], y[j], self.p);
                for k in 0..n {
                    let c = self.const_at(i, j, k);
                    if c != 0 {
                        out[k] = fp_add(out[k], fp_mul(f, c, self.p), self.p);
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by x in the regular representation.
    pub fn left_regular(&self, x: &[u64]) -> FpMatrix {
        let n = self.n;
        let mut m = FpMatrix::zeros(self.p, n, n);
        for j in 0..n {
            let mut e = vec![0u64; n];
            e[j] = 1;
            let col = self.mul(x, &e);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let units: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                e
            })
            .collect();
        for e in &units {
            if self.mul(&self.identity, e) != *e || self.mul(e, &self.identity) != *e {
                return Err(Error::Inconsistency("residue algebra identity law".into()));
            }
        }
        for a in &units {
            for b in &units {
                let ab = self.mul(a, b);
                for c in &units {
                    let bc = self.mul(b, c);
                    if self.mul(&ab, c) != self.mul(a, &bc) {
                        return Err(Error::Inconsistency("residue algebra associativity".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Quotient by a two-sided ideal, in the complement coordinates picked by
    /// the echelon form of the ideal.
    pub fn quotient(&self, ideal: &[Vec<u64>]) -> Result<ResidueAlgebra> {
        let n = self.n;
        let (rows, pivots) = echelonize(self.p, n, ideal);
        let complement: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let m = complement.len();
        let reduce = |v: &[u64]| -> Vec<u64> {
            let mut w = v.to_vec();
            for (r, &pc) in rows.iter().zip(pivots.iter()) {
                if w[pc] != 0 {
                    let f = w[pc];
                    for (wi, ri) in w.iter_mut().zip(r.iter()) {
                        *wi = fp_sub(*wi, fp_mul(f, *ri, self.p), self.p);
                    }
                }
            }
            complement.iter().map(|&j| w[j]).collect()
        };
        let lift = |q: &[u64]| -> Vec<u64> {
            let mut v = vec![0u64; n];
            for (t, &j) in complement.iter().enumerate() {
                v[j] = q[t];
            }
            v
        };
        let mut consts = vec![0u64; m * m * m];
        for a in 0..m {
            let ea = lift(&unit_vec(m, a));
            for b in 0..m {
                let eb = lift(&unit_vec(m, b));
                let prod = reduce(&self.mul(&ea, &eb));
                for (k, &v) in prod.iter().enumerate() {
                    consts[(a * m + b) * m + k] = v;
                }
            }
        }
        let identity = reduce(&self.identity);
        ResidueAlgebra::new(self.p, m, consts, identity)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<u64> {
    let mut e = vec![0u64; n];
    e[i] = 1;
    e
}

/// Echelonized span: returns rref rows (zero rows dropped) and pivot columns.
fn echelonize(p: u64, width: usize, vectors: &[Vec<u64>]) -> (Vec<Vec<u64>>, Vec<usize>) {
    if vectors.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut m = FpMatrix::zeros(p, vectors.len(), width);
    for (i, v) in vectors.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let pivots = m.rref();
    let rows = (0..pivots.len())
        .map(|i| (0..width).map(|j| m.at(i, j)).collect())
        .collect();
    (rows, pivots)
}

fn in_span(p: u64, rows: &[Vec<u64>], pivots: &[usize], v: &[u64]) -> bool {
    let mut w = v.to_vec();
    for (r, &pc) in rows.iter().zip(pivots.iter()) {
        if w[pc] != 0 {
            let f = w[pc];
            for (wi, ri) in w.iter_mut().zip(r.iter()) {
                *wi = fp_sub(*wi, fp_mul(f, *ri, p), p);
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

/// The residue algebra of an order modulo p times itself.
pub fn residue_algebra(order: &Order) -> ResidueAlgebra {
    let ctx = order.ctx();
    let n = order.matrix_dim() * order.matrix_dim();
    let mats = order.basis_matrices();
    let mut consts = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let coords = order
                .carrier
                .coordinates(&vec_col_major(&mats[i].mul(&mats[j])));
            for (k, c) in coords.iter().enumerate() {
                consts[(i * n + j) * n + k] = ctx.residue(c).expect("order closed under products");
            }
        }
    }
    let id_coords = order
        .carrier
        .coordinates(&vec_col_major(&RationalMatrix::identity(
            order.matrix_dim(),
        )));
    let identity: Vec<u64> = id_coords
        .iter()
        .map(|c| ctx.residue(c).expect("identity lies in the order"))
        .collect();
    ResidueAlgebra::new(ctx.prime(), n, consts, identity).expect("structure constants of an order")
}

/// The largest nilpotent two-sided ideal of a finite-dimensional algebra over
/// F_p, by the descending chain of kernels of the characteristic-coefficient
/// forms x, y -> coeff_(p^k) of charpoly(xy) for k = 0..floor(log_p dim).
/// The result is verified to be a nilpotent two-sided ideal.
pub fn algebra_radical(a: &ResidueAlgebra) -> Result<Vec<Vec<u64>>> {
    let n = a.dim();
    let p = a.p();
    let mut basis: Vec<Vec<u64>> = (0..n).map(|i| unit_vec(n, i)).collect();
    let mut level = 0u32;
    while (p as u128).pow(level + 1) <= n as u128 {
        level += 1;
    }
    for k in 0..=level {
        if basis.is_empty() {
            break;
        }
        let idx = (p as usize).pow(k);
        let m = basis.len();
        let mut nmat = FpMatrix::zeros(p, m, m);
        for row in 0..m {
            for col in 0..m {
                let prod = a.mul(&basis[col], &basis[row]);
                let coeffs = a.left_regular(&prod).charpoly();
                nmat.set(row, col, coeffs[idx]);
            }
        }
        let kernel = nmat.kernel_basis();
        basis = kernel
            .into_iter()
            .map(|xi| {
                let mut v = vec![0u64; n];
                for (b, &c) in xi.iter().enumerate() {
                    if c != 0 {
                        for (vi, bi) in v.iter_mut().zip(basis[b].iter()) {
                            *vi = fp_add(*vi, fp_mul(c, *bi, p), p);
                        }
                    }
                }
                v
            })
            .collect();
    }
    let (rows, pivots) = echelonize(p, n, &basis);
    verify_radical_candidate(a, &rows, &pivots)?;
    Ok(rows)
}

fn verify_radical_candidate(a: &ResidueAlgebra, rows: &[Vec<u64>], pivots: &[usize]) -> Result<()> {
    let n = a.dim();
    let p = a.p();
    // two-sided ideal
    for u in (0..n).map(|i| unit_vec(n, i)) {
        for r in rows {
            if !in_span(p, rows, pivots, &a.mul(&u, r)) || !in_span(p, rows, pivots, &a.mul(r, &u))
            {
                return Err(Error::Inconsistency("radical is not an ideal".into()));
            }
        }
    }
    if !is_nilpotent_subspace(a, rows) {
        return Err(Error::Inconsistency("radical is not nilpotent".into()));
    }
    Ok(())
}

/// Whether the span of the given vectors is a nilpotent multiplicative set.
pub fn is_nilpotent_subspace(a: &ResidueAlgebra, basis: &[Vec<u64>]) -> bool {
    let p = a.p();
    let n = a.dim();
    let mut current: Vec<Vec<u64>> = basis.to_vec();
    for _ in 0..=n {
        if current.is_empty() {
            return true;
        }
        let mut products = Vec::new();
        for x in &current {
            for y in basis {
                let prod = a.mul(x, y);
                if prod.iter().any(|&v| v != 0) {
                    products.push(prod);
                }
            }
        }
        let (rows, _) = echelonize(p, n, &products);
        current = rows;
    }
    false
}

/// The Jacobson radical of an order: the preimage of the residue-algebra
/// radical together with p times the order.
pub fn jacobson_radical(order: &Order) -> Lattice {
    let ctx = order.ctx();
    let n = order.matrix_dim() * order.matrix_dim();
    let a = residue_algebra(order);
    let rad = algebra_radical(&a).expect("radical of a residue algebra");
    let p_scalar = ctx.uniformizer();
    let mut gens: Vec<Vec<Scalar>> = order
        .carrier
        .basis()
        .columns()
        .into_iter()
        .map(|col| col.into_iter().map(|x| x * &p_scalar).collect())
        .collect();
    for v in rad {
        let mut lift = vec![Scalar::zero(); n];
        for (t, &c) in v.iter().enumerate() {
            if c != 0 {
                let col = order.carrier.basis().column(t);
                let f = crate::valuation::scalar_int(c as i64);
                for (li, ci) in lift.iter_mut().zip(col) {
                    *li += ci * &f;
                }
            }
        }
        gens.push(lift);
    }
    Lattice::from_generators(ctx, n, gens).expect("radical spans full rank")
}

/// The idealizer of a full lattice of matrices: the largest order in which it
/// is a two-sided ideal.
pub fn idealizer(d: usize, lattice: &Lattice) -> Result<Order> {
    let ctx = lattice.ctx();
    let n = d * d;
    if lattice.dim() != n {
        return Err(Error::Dimension(
            "idealizer input must have dimension d^2".into(),
        ));
    }
    let b_inv = lattice.basis().inverse()?;
    let id = RationalMatrix::identity(d);
    let mut functionals: Vec<Vec<Scalar>> = Vec::with_capacity(2 * n * n);
    for col in lattice.basis().columns() {
        let g = unvec_col_major(d, &col);
        // X -> vec(X g) and X -> vec(g X) must both land in the lattice
        let right = b_inv.mul(&g.transpose().kron(&id));
        let left = b_inv.mul(&id.kron(&g));
        for m in [right, left] {
            for i in 0..n {
                functionals.push((0..n).map(|j| m.at(i, j).clone()).collect());
            }
        }
    }
    let carrier = dual_of_span(ctx, n, functionals)?;
    Order::try_new(d, carrier)
}

/// The ascending chain obtained by alternating Jacobson radical and
/// idealizer, up to and including its fixed point. Each step grows by at
/// most a factor of 1/p, which bounds the length.
pub fn radical_idealizer_chain(order: &Order) -> Result<Vec<Order>> {
    let mut chain = vec![order.clone()];
    loop {
        let last = chain.last().unwrap();
        let jac = jacobson_radical(last);
        let next = idealizer(order.matrix_dim(), &jac)?;
        if next.carrier() == last.carrier() {
            break;
        }
        let step_bounded =
            next.contains(last) && last.carrier().contains(&next.carrier().scale_p(1));
        if !step_bounded {
            return Err(Error::Inconsistency(
                "radical idealizer step escapes the expected window".into(),
            ));
        }
        chain.push(next);
        if chain.len() > 10_000 {
            return Err(Error::Inconsistency(
                "radical idealizer chain does not terminate".into(),
            ));
        }
    }
    Ok(chain)
}

/// The PZ order of the invariant classes; contains the order.
pub fn closure(order: &Order, cap: usize) -> Result<Order> {
    let stable = invariant_classes(order, cap)?;
    pz_order(&stable)
}

pub fn is_closed(order: &Order, cap: usize) -> Result<bool> {
    Ok(closure(order, cap)?.carrier() == order.carrier())
}

/// Default bound for the exact degree search; larger degrees are reported as
/// a bound rather than searched.
pub const DEFAULT_DEGREE_BOUND: usize = 4;

/// Minimum size minus one of a subset of the invariant classes whose PZ order
/// recovers the order, searched in canonical order by increasing size.
/// `None` when every subset of size up to k_max + 1 fails.
pub fn degree_exact_small(order: &Order, k_max: usize, cap: usize) -> Result<Option<usize>> {
    if !is_closed(order, cap)? {
        return Err(Error::NotClosed);
    }
    let stable = invariant_classes(order, cap)?;
    let ctx = order.ctx();
    let n = order.matrix_dim() * order.matrix_dim();
    let target = order.carrier().dual();
    let target_det = target.det_valuation();
    let duals: Vec<Vec<Vec<Scalar>>> = stable.iter().map(dual_end_columns).collect();
    for size in 1..=(k_max + 1) {
        if size > stable.len() {
            break;
        }
        let mut found = None;
        for_each_combination(stable.len(), size, &mut |subset| {
            if found.is_some() {
                return;
            }
            let cols = subset.iter().flat_map(|&i| duals[i].iter().cloned());
            let sum = Lattice::from_generators(ctx, n, cols).expect("duals span");
            if sum.det_valuation() == target_det {
                found = Some(subset.to_vec());
            }
        });
        if let Some(witness) = found {
            let cols = witness.iter().flat_map(|&i| duals[i].iter().cloned());
            let sum = Lattice::from_generators(ctx, n, cols)?;
            if sum != target {
                return Err(Error::Inconsistency(
                    "degree witness determinant collision".into(),
                ));
            }
            return Ok(Some(size - 1));
        }
    }
    Ok(None)
}

/// Lexicographic combinations of {0..n} of the given size.
fn for_each_combination(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    if size > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The product lattice spanned by pairwise products of the basis matrices.
/// Used by tests to confirm nilpotency statements.
pub fn lattice_product(d: usize, a: &Lattice, b: &Lattice) -> Lattice {
    let gens = a.basis().columns().into_iter().flat_map(|ca| {
        let ma = unvec_col_major(d, &ca);
        b.basis()
            .columns()
            .into_iter()
            .map(move |cb| vec_col_major(&ma.mul(&unvec_col_major(d, &cb))))
            .collect::<Vec<_>>()
    });
    Lattice::from_generators(a.ctx(), d * d, gens).expect("product of full lattices")
}
