//! The lattice-class model of the affine building: homothety classes,
//! apartments and exponent vectors, distance-one neighbors, balls around
//! classes and sets, geodesics, invariant classes of an order, the simplex
//! predicate and convex hulls.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fp::rref_subspace_bases;
use crate::lattice::{class_distance, lattice_in_frame, Lattice};
use crate::matrix::RationalMatrix;
use crate::order::Order;
use crate::valuation::{PAdicContext, Scalar};

/// Default cap on any class enumeration.
pub const DEFAULT_CLASS_CAP: usize = 100_000;

/// A homothety class of lattices, represented by the unique lattice in the
/// class whose canonical basis has minimum diagonal exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeClass {
    rep: Lattice,
}

impl LatticeClass {
    pub fn rep(&self) -> &Lattice {
        &self.rep
    }

    pub fn ctx(&self) -> PAdicContext {
        self.rep.ctx()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn distance(&self, other: &LatticeClass) -> i64 {
        class_distance(&self.rep, &other.rep)
    }
}

/// The homothety class of a lattice.
pub fn class_of(l: &Lattice) -> LatticeClass {
    let min = *l.diag_exponents().iter().min().expect("nonempty diagonal");
    LatticeClass {
        rep: l.scale_p(-min),
    }
}

/// An apartment, given by an invertible frame whose columns span the d lines.
#[derive(Debug, Clone)]
pub struct Apartment {
    ctx: PAdicContext,
    frame: RationalMatrix,
    frame_inv: RationalMatrix,
}

impl Apartment {
    pub fn new(ctx: PAdicContext, frame: RationalMatrix) -> Result<Self> {
        if !frame.is_square() {
            return Err(Error::Dimension("frame must be square".into()));
        }
        let frame_inv = frame.inverse()?;
        Ok(Apartment {
            ctx,
            frame,
            frame_inv,
        })
    }

    pub fn standard(ctx: PAdicContext, d: usize) -> Self {
        Apartment {
            ctx,
            frame: RationalMatrix::identity(d),
            frame_inv: RationalMatrix::identity(d),
        }
    }

    pub fn ctx(&self) -> PAdicContext {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn frame(&self) -> &RationalMatrix {
        &self.frame
    }

    pub fn frame_inv(&self) -> &RationalMatrix {
        &self.frame_inv
    }

    /// The lattice L_u spanned by p^(u_i) times the frame columns.
    pub fn lattice_at(&self, u: &[i64]) -> Lattice {
        lattice_in_frame(self.ctx, &self.frame, u).expect("frame is invertible")
    }

    pub fn class_at(&self, u: &[i64]) -> LatticeClass {
        class_of(&self.lattice_at(u))
    }

    /// Exponent vector of a class lying in this apartment, normalized to
    /// minimum entry zero. Errors when the class is not diagonal here.
    pub fn exponent_vector(&self, class: &LatticeClass) -> Result<Vec<i64>> {
        let t = self.frame_inv.mul(class.rep.basis());
        let in_frame = Lattice::canonicalize(self.ctx, &t)?;
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && !in_frame.basis().at(i, j).is_zero() {
                    return Err(Error::NotInApartment);
                }
            }
        }
        let mut u = in_frame.diag_exponents();
        let min = *u.iter().min().unwrap();
        for e in &mut u {
            *e -= min;
        }
        Ok(u)
    }

    pub fn contains(&self, class: &LatticeClass) -> bool {
        self.exponent_vector(class).is_ok()
    }
}

/// A finite set of distinct classes, kept sorted lexicographically by
/// canonical basis entries so that output is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    items: Vec<LatticeClass>,
}

impl ClassSet {
    pub fn new(mut items: Vec<LatticeClass>) -> Self {
        items.sort();
        items.dedup();
        ClassSet { items }
    }

    pub fn singleton(c: LatticeClass) -> Self {
        ClassSet { items: vec![c] }
    }

    pub fn from_sorted_set(set: BTreeSet<LatticeClass>) -> Self {
        ClassSet {
            items: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatticeClass> {
        self.items.iter()
    }

    pub fn get(&self, i: usize) -> &LatticeClass {
        &self.items[i]
    }

    pub fn contains(&self, c: &LatticeClass) -> bool {
        self.items.binary_search(c).is_ok()
    }

    pub fn union(&self, other: &ClassSet) -> ClassSet {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        ClassSet::new(items)
    }

    pub fn is_subset_of(&self, other: &ClassSet) -> bool {
        self.items.iter().all(|c| other.contains(c))
    }

    /// Distance from a class to this set (minimum over members).
    pub fn distance_to(&self, c: &LatticeClass) -> i64 {
        self.items
            .iter()
            .map(|m| m.distance(c))
            .min()
            .expect("distance to empty set")
    }
}

impl<'a> IntoIterator for &'a ClassSet {
    type Item = &'a LatticeClass;
    type IntoIter = std::slice::Iter<'a, LatticeClass>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl FromIterator<LatticeClass> for ClassSet {
    fn from_iter<T: IntoIterator<Item = LatticeClass>>(iter: T) -> Self {
        ClassSet::new(iter.into_iter().collect())
    }
}

/// The classes at distance exactly one: one for each proper nonzero subspace
/// of the residue space L/pL, enumerated by row-echelon representatives.
pub fn neighbors(class: &LatticeClass) -> ClassSet {
    let ctx = class.ctx();
    let d = class.dim();
    let rep = class.rep();
    let p_cols: Vec<Vec<Scalar>> = (0..d)
        .map(|j| {
            rep.basis()
                .column(j)
                .into_iter()
                .map(|x| x * ctx.uniformizer())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for k in 1..d {
        for rows in rref_subspace_bases(ctx.prime(), d, k) {
            let mut gens = p_cols.clone();
            for w in rows {
                // lift of the subspace vector through the basis of L
                let mut v = vec![Scalar::zero(); d];
                for (j, &c) in w.iter().enumerate() {
                    if c != 0 {
                        let col = rep.basis().column(j);
                        let cf = crate::valuation::scalar_int(c as i64);
                        for (vi, ci) in v.iter_mut().zip(col) {
                            *vi += ci * &cf;
                        }
                    }
                }
                gens.push(v);
            }
            let l = Lattice::from_generators(ctx, d, gens).expect("full rank neighbor");
            out.push(class_of(&l));
        }
    }
    ClassSet::new(out)
}

/// Closed ball of radius r around a class, by breadth-first search on the
/// distance-one graph.
pub fn ball(center: &LatticeClass, r: i64, cap: usize) -> Result<ClassSet> {
    ball_around_set(&ClassSet::singleton(center.clone()), r, cap)
}

/// Closed ball of radius r around a set of classes.
pub fn ball_around_set(seed: &ClassSet, r: i64, cap: usize) -> Result<ClassSet> {
    if seed.is_empty() {
        return Err(Error::Domain("ball around an empty set".into()));
    }
    let mut visited: BTreeSet<LatticeClass> = seed.iter().cloned().collect();
    let mut frontier: Vec<LatticeClass> = seed.iter().cloned().collect();
    for _ in 0..r {
        let mut next = Vec::new();
        for c in &frontier {
            for n in &neighbors(c) {
                if !visited.contains(n) {
                    visited.insert(n.clone());
                    if visited.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    next.push(n.clone());
                }
            }
        }
        frontier = next;
    }
    Ok(ClassSet::from_sorted_set(visited))
}

/// A shortest path in the distance-one graph, of length distance + 1.
pub fn geodesic(from: &LatticeClass, to: &LatticeClass) -> Vec<LatticeClass> {
    let ctx = from.ctx();
    if from == to {
        return vec![from.clone()];
    }
    // choose a representative of `to` squeezed between p^s L1 and L1
    let t = from
        .rep()
        .basis()
        .inverse()
        .expect("canonical basis invertible")
        .mul(to.rep().basis());
    let s = crate::lattice::smith_valuations(ctx, &t).expect("invertible");
    let shift = s[0];
    let target = to.rep().scale_p(-shift);
    let mut path = vec![from.clone()];
    let mut current = from.rep().clone();
    loop {
        let next = current.scale_p(1).sum(&target);
        let cls = class_of(&next);
        if &cls == path.last().unwrap() {
            break;
        }
        path.push(cls);
        current = next;
        if path.last().unwrap() == to {
            break;
        }
    }
    path
}

/// The set of classes of lattices stabilized by every element of the order:
/// seeded with the class of `order * standard lattice` and grown through
/// invariant neighbors (geodesics between invariant classes stay invariant,
/// so the set is connected in the distance-one graph).
pub fn invariant_classes(order: &Order, cap: usize) -> Result<ClassSet> {
    let ctx = order.ctx();
    let d = order.matrix_dim();
    let mut gens: Vec<Vec<Scalar>> = Vec::new();
    for m in order.basis_matrices() {
        for j in 0..d {
            gens.push(m.column(j));
        }
    }
    let seed_lattice = Lattice::from_generators(ctx, d, gens)?;
    let seed = class_of(&seed_lattice);
    if !is_stable(order, &seed) {
        return Err(Error::Inconsistency("seed class not stabilized".into()));
    }
    let mut invariant: BTreeSet<LatticeClass> = BTreeSet::new();
    let mut seen: BTreeSet<LatticeClass> = BTreeSet::new();
    let mut queue = VecDeque::new();
    invariant.insert(seed.clone());
    seen.insert(seed.clone());
    queue.push_back(seed);
    while let Some(c) = queue.pop_front() {
        for n in &neighbors(&c) {
            if seen.contains(n) {
                continue;
            }
            seen.insert(n.clone());
            if seen.len() > cap {
                return Err(Error::CapExceeded(cap));
            }
            if is_stable(order, n) {
                invariant.insert(n.clone());
                queue.push_back(n.clone());
            }
        }
    }
    Ok(ClassSet::from_sorted_set(invariant))
}

/// Whether every basis element of the order maps the class representative
/// into itself.
pub fn is_stable(order: &Order, class: &LatticeClass) -> bool {
    let rep = class.rep();
    let d = rep.dim();
    order.basis_matrices().iter().all(|g| {
        (0..d).all(|j| {
            let v = g.mul_vec(&rep.basis().column(j));
            rep.member(&v)
        })
    })
}

/// Whether representatives can be chosen and ordered into a chain
/// `L_1 > L_2 > ... > L_s > p L_1`.
pub fn is_simplex(set: &ClassSet) -> bool {
    let s = set.len();
    if s == 0 {
        return false;
    }
    if s == 1 {
        return true;
    }
    let base = set.get(0);
    let mut reps = Vec::new();
    for c in set.iter().skip(1) {
        // unique representative strictly between p*base and base, if any
        let t = base
            .rep()
            .basis()
            .inverse()
            .expect("canonical basis invertible")
            .mul(c.rep().basis());
        let vals = crate::lattice::smith_valuations(base.ctx(), &t).expect("invertible");
        let shift = vals[0];
        if vals[vals.len() - 1] - shift > 1 {
            return false;
        }
        reps.push(c.rep().scale_p(-shift));
    }
    // the window representatives must form a chain under inclusion
    reps.sort_by_key(|l| l.det_valuation());
    for w in reps.windows(2) {
        if !w[0].contains(&w[1]) {
            return false;
        }
    }
    true
}

/// Smallest PZ-closed set containing the given classes.
pub fn convex_hull(set: &ClassSet, cap: usize) -> Result<ClassSet> {
    let order = crate::order::pz_order(set)?;
    invariant_classes(&order, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::scalar_int;

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::new(p).unwrap()
    }

    fn diag_lattice(p: u64, exps: &[i64]) -> Lattice {
        let c = ctx(p);
        Apartment::standard(c, exps.len()).lattice_at(exps)
    }

    #[test]
    fn class_normalization() {
        let c = ctx(2);
        let z = Lattice::standard(c, 2);
        assert_eq!(class_of(&z).rep(), &z);
        assert_eq!(class_of(&z.scale_p(3)), class_of(&z));
        let l = diag_lattice(2, &[2, 5]);
        assert_eq!(class_of(&l).rep().diag_exponents(), vec![0, 3]);
    }

    #[test]
    fn exponent_vectors() {
        let c = ctx(2);
        let a = Apartment::standard(c, 3);
        let z = class_of(&Lattice::standard(c, 3));
        assert_eq!(a.exponent_vector(&z).unwrap(), vec![0, 0, 0]);
        let l = class_of(&diag_lattice(2, &[0, 3, 1]));
        assert_eq!(a.exponent_vector(&l).unwrap(), vec![0, 3, 1]);

        let off = Lattice::canonicalize(
            c,
            &RationalMatrix::from_rows(vec![
                vec![scalar_int(1), scalar_int(0)],
                vec![scalar_int(1), scalar_int(2)],
            ])
            .unwrap(),
        )
        .unwrap();
        let a2 = Apartment::standard(c, 2);
        assert!(matches!(
            a2.exponent_vector(&class_of(&off)),
            Err(Error::NotInApartment)
        ));
    }

    #[test]
    fn neighbor_counts() {
        let z2 = class_of(&Lattice::standard(ctx(2), 2));
        assert_eq!(neighbors(&z2).len(), 3);
        let z2_3 = class_of(&Lattice::standard(ctx(3), 2));
        assert_eq!(neighbors(&z2_3).len(), 4);
        let z3 = class_of(&Lattice::standard(ctx(2), 3));
        assert_eq!(neighbors(&z3).len(), 14);
    }

    #[test]
    fn neighbors_are_at_distance_one() {
        let c = class_of(&diag_lattice(3, &[0, 2]));
        for n in &neighbors(&c) {
            assert_eq!(c.distance(n), 1);
        }
    }

    #[test]
    fn ball_sizes_in_the_tree() {
        let z2 = class_of(&Lattice::standard(ctx(2), 2));
        assert_eq!(ball(&z2, 0, 1000).unwrap().len(), 1);
        assert_eq!(ball(&z2, 1, 1000).unwrap().len(), 4);
        assert_eq!(ball(&z2, 2, 1000).unwrap().len(), 10);
    }

    #[test]
    fn ball_around_segment() {
        let c = ctx(2);
        let a = Apartment::standard(c, 2);
        let seed = ClassSet::new(vec![a.class_at(&[0, 0]), a.class_at(&[1, 0])]);
        let b = ball_around_set(&seed, 1, 1000).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(ball_around_set(&seed, 0, 1000).unwrap(), seed);
    }

    #[test]
    fn ball_cap_is_enforced() {
        let z2 = class_of(&Lattice::standard(ctx(2), 2));
        assert!(matches!(ball(&z2, 3, 5), Err(Error::CapExceeded(5))));
    }

    #[test]
    fn geodesic_examples() {
        let c = ctx(2);
        let a = Apartment::standard(c, 2);
        let x = a.class_at(&[0, 0]);
        assert_eq!(geodesic(&x, &x), vec![x.clone()]);

        let y = a.class_at(&[3, 0]);
        let path = geodesic(&x, &y);
        assert_eq!(path.len(), 4);
        assert_eq!(path[0], x);
        assert_eq!(path[3], y);
        for w in path.windows(2) {
            assert_eq!(w[0].distance(&w[1]), 1);
        }
        let expected: Vec<LatticeClass> = (0..4).map(|i| a.class_at(&[i, 0])).collect();
        assert_eq!(path, expected);
    }

    #[test]
    fn simplex_predicate() {
        let c = ctx(2);
        let a = Apartment::standard(c, 2);
        let x = a.class_at(&[0, 0]);
        assert!(is_simplex(&ClassSet::singleton(x.clone())));
        let y = a.class_at(&[1, 0]);
        assert!(is_simplex(&ClassSet::new(vec![x.clone(), y.clone()])));
        let z = a.class_at(&[2, 0]);
        assert!(!is_simplex(&ClassSet::new(vec![x, z])));

        // three classes pairwise at distance one in d = 3
        let a3 = Apartment::standard(c, 3);
        let s = ClassSet::new(vec![
            a3.class_at(&[0, 0, 0]),
            a3.class_at(&[1, 0, 0]),
            a3.class_at(&[1, 1, 0]),
        ]);
        assert!(is_simplex(&s));
        // distinct lines in the residue space are incomparable, distance two
        let t = ClassSet::new(vec![
            a3.class_at(&[0, 0, 0]),
            a3.class_at(&[1, 0, 0]),
            a3.class_at(&[0, 1, 0]),
        ]);
        assert!(!is_simplex(&t));
    }

    #[test]
    fn maximal_orders_stabilize_one_class() {
        let _c = ctx(2);
        let l = diag_lattice(2, &[0, 2, 1]);
        let end = crate::order::endomorphism_order(&l);
        let stable = invariant_classes(&end, 1000).unwrap();
        assert_eq!(stable, ClassSet::singleton(class_of(&l)));
    }

    #[test]
    fn hull_of_a_segment_is_the_segment() {
        let c = ctx(2);
        let a = Apartment::standard(c, 2);
        let ends = ClassSet::new(vec![a.class_at(&[0, 0]), a.class_at(&[3, 0])]);
        let hull = convex_hull(&ends, 1000).unwrap();
        let expected: ClassSet = (0..=3).map(|i| a.class_at(&[i, 0])).collect();
        assert_eq!(hull, expected);
        assert_eq!(convex_hull(&hull, 1000).unwrap(), hull);
        assert_eq!(
            convex_hull(&ClassSet::singleton(a.class_at(&[1, 0])), 1000).unwrap(),
            ClassSet::singleton(a.class_at(&[1, 0]))
        );
    }
}
