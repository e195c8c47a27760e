//! Exponent matrices and the orders they cut out: graduated orders and their
//! polytropes of invariant classes, ball and bolytrope orders, star
//! configurations, apartment slices, central-polytrope recovery and the
//! classification of closed orders for d = 2.

use crate::building::{
    ball_around_set, class_of, invariant_classes, Apartment, ClassSet, LatticeClass,
};
use crate::error::{Error, Result};
use crate::lattice::{compatible_bases, smith_valuations, Lattice};
use crate::matrix::{vec_col_major, RationalMatrix};
use crate::order::{pz_order, radical_idealizer_chain, Order};
use crate::valuation::{PAdicContext, Scalar};

/// An integer matrix with zero diagonal satisfying the triangle inequalities
/// `M_ij + M_jk >= M_ik`; the exponent matrix of a graduated order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExponentMatrix {
    d: usize,
    entries: Vec<i64>,
}

impl ExponentMatrix {
    pub fn new(d: usize, entries: Vec<i64>) -> Result<Self> {
        if d == 0 || entries.len() != d * d {
            return Err(Error::Dimension("exponent matrix entries".into()));
        }
        let m = ExponentMatrix { d, entries };
        for i in 0..d {
            if m.at(i, i) != 0 {
                return Err(Error::Domain("exponent matrix needs zero diagonal".into()));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if m.at(i, j) + m.at(j, k) < m.at(i, k) {
                        return Err(Error::Domain(format!(
                            "triangle inequality fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension("exponent matrix must be square".into()));
        }
        Self::new(d, rows.concat())
    }

    pub fn zero(d: usize) -> Self {
        ExponentMatrix {
            d,
            entries: vec![0; d * d],
        }
    }

    /// The all-ones-off-diagonal matrix J_d.
    pub fn ones_off_diagonal(d: usize) -> Self {
        let mut entries = vec![1i64; d * d];
        for i in 0..d {
            entries[i * d + i] = 0;
        }
        ExponentMatrix { d, entries }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.at(i, j)).collect())
            .collect()
    }

    /// M + r * J_d; stays in the polytrope region for r >= 0.
    pub fn widen(&self, r: i64) -> ExponentMatrix {
        let mut entries = self.entries.clone();
        for i in 0..self.d {
            for j in 0..self.d {
                if i != j {
                    entries[i * self.d + j] += r;
                }
            }
        }
        ExponentMatrix { d: self.d, entries }
    }

    /// Column i, the exponent vector of the i-th projective lattice.
    pub fn column(&self, i: usize) -> Vec<i64> {
        (0..self.d).map(|r| self.at(r, i)).collect()
    }
}

/// Entrywise-largest exponent matrix below the input: min-plus all-pairs
/// shortest paths. Errors on a negative cycle.
pub fn triangle_closure(rows: &[Vec<i64>]) -> Result<ExponentMatrix> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Dimension("closure input must be square".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row[i] != 0 {
            return Err(Error::Domain("closure input needs zero diagonal".into()));
        }
    }
    let mut w: Vec<i64> = rows.concat();
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let via = w[i * d + k] + w[k * d + j];
                if via < w[i * d + j] {
                    w[i * d + j] = via;
                }
            }
        }
    }
    for i in 0..d {
        if w[i * d + i] < 0 {
            return Err(Error::NegativeCycle);
        }
    }
    ExponentMatrix::new(d, w)
}

/// The graduated order with entry (i, j) ranging over p^(M_ij) Z_(p), written
/// in the coordinates of the given frame.
pub fn graduated_order(apartment: &Apartment, m: &ExponentMatrix) -> Order {
    let ctx = apartment.ctx();
    let d = m.d();
    assert_eq!(apartment.dim(), d);
    let f = apartment.frame();
    let f_inv = apartment.frame_inv();
    let mut gens = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let unit = RationalMatrix::unit(d, i, j).scale(&ctx.p_pow(m.at(i, j)));
            gens.push(vec_col_major(&f.mul(&unit).mul(f_inv)));
        }
    }
    let carrier = Lattice::from_generators(ctx, d * d, gens).expect("graduated basis spans");
    Order::from_carrier_trusted(d, carrier)
}

/// Integral points of the polytrope, normalized to minimum entry zero and
/// sorted lexicographically; these are the exponent vectors of the classes
/// stabilized by the graduated order.
pub fn polytrope_points(m: &ExponentMatrix) -> Vec<Vec<i64>> {
    let d = m.d();
    if d == 1 {
        return vec![vec![0]];
    }
    let lo: Vec<i64> = (0..d - 1).map(|i| -m.at(d - 1, i)).collect();
    let hi: Vec<i64> = (0..d - 1).map(|i| m.at(i, d - 1)).collect();
    let mut points = Vec::new();
    let mut u = lo.clone();
    'outer: loop {
        let mut full = u.clone();
        full.push(0);
        let ok = (0..d).all(|i| (0..d).all(|j| m.at(i, j) + full[j] >= full[i]));
        if ok {
            let min = *full.iter().min().unwrap();
            points.push(full.iter().map(|x| x - min).collect::<Vec<i64>>());
        }
        let mut idx = 0;
        loop {
            if idx == d - 1 {
                break 'outer;
            }
            u[idx] += 1;
            if u[idx] <= hi[idx] {
                break;
            }
            u[idx] = lo[idx];
            idx += 1;
        }
    }
    points.sort();
    points.dedup();
    points
}

/// The classes of the polytrope points in the given frame.
pub fn polytrope_class_set(apartment: &Apartment, m: &ExponentMatrix) -> ClassSet {
    polytrope_points(m)
        .into_iter()
        .map(|u| apartment.class_at(&u))
        .collect()
}

/// Classes of the projective lattices (the columns of M) and the dimension of
/// the polytrope: number of distinct classes minus one.
pub fn projective_classes(apartment: &Apartment, m: &ExponentMatrix) -> (ClassSet, usize) {
    let set: ClassSet = (0..m.d())
        .map(|i| apartment.class_at(&m.column(i)))
        .collect();
    let dim = set.len() - 1;
    (set, dim)
}

/// The ball order around a lattice: scalars modulo p^r plus p^r times the
/// endomorphisms, written in a basis of the lattice.
pub fn ball_order(l: &Lattice, r: i64) -> Order {
    assert!(r >= 0, "radius must be nonnegative");
    let ctx = l.ctx();
    let d = l.dim();
    let b = l.basis();
    let b_inv = b.inverse().expect("canonical basis invertible");
    let pr = ctx.p_pow(r);
    let mut gens = vec![vec_col_major(&RationalMatrix::identity(d))];
    for i in 0..d {
        for j in 0..d {
            if i == 0 && j == 0 {
                continue;
            }
            let unit = RationalMatrix::unit(d, i, j).scale(&pr);
            gens.push(vec_col_major(&b.mul(&unit).mul(&b_inv)));
        }
    }
    let carrier = Lattice::from_generators(ctx, d * d, gens).expect("ball order spans");
    Order::from_carrier_trusted(d, carrier)
}

/// The bolytrope order: entries bounded by M + r J_d with all diagonal
/// entries congruent modulo p^r, in the coordinates of the frame.
pub fn bolytrope_order(apartment: &Apartment, m: &ExponentMatrix, r: i64) -> Order {
    assert!(r >= 0, "radius must be nonnegative");
    let ctx = apartment.ctx();
    let d = m.d();
    assert_eq!(apartment.dim(), d);
    let f = apartment.frame();
    let f_inv = apartment.frame_inv();
    let wide = m.widen(r);
    let pr = ctx.p_pow(r);
    let push = |mat: &RationalMatrix, gens: &mut Vec<Vec<Scalar>>| {
        gens.push(vec_col_major(&f.mul(mat).mul(f_inv)));
    };
    let mut gens = Vec::with_capacity(d * d);
    push(&RationalMatrix::identity(d), &mut gens);
    for i in 1..d {
        push(&RationalMatrix::unit(d, i, i).scale(&pr), &mut gens);
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                push(
                    &RationalMatrix::unit(d, i, j).scale(&ctx.p_pow(wide.at(i, j))),
                    &mut gens,
                );
            }
        }
    }
    let carrier = Lattice::from_generators(ctx, d * d, gens).expect("bolytrope order spans");
    Order::from_carrier_trusted(d, carrier)
}

/// The bolytrope: all classes within distance r of the polytrope.
pub fn bolytrope(
    apartment: &Apartment,
    m: &ExponentMatrix,
    r: i64,
    cap: usize,
) -> Result<ClassSet> {
    ball_around_set(&polytrope_class_set(apartment, m), r, cap)
}

/// A star configuration of d + 1 lattices inside the radius-r ball around the
/// lattice spanned by the given basis. At r = 0 the classes collapse to one.
#[derive(Debug, Clone)]
pub struct StarConfiguration {
    pub lattices: Vec<Lattice>,
    pub classes: ClassSet,
    pub collapsed: bool,
}

pub fn star_configuration(
    ctx: PAdicContext,
    basis: &RationalMatrix,
    r: i64,
) -> Result<StarConfiguration> {
    if !basis.is_square() {
        return Err(Error::Dimension("star configuration basis".into()));
    }
    if r < 0 {
        return Err(Error::Domain("radius must be nonnegative".into()));
    }
    let d = basis.rows();
    let center = Lattice::canonicalize(ctx, basis)?;
    let scaled = center.scale_p(r);
    let mut lattices = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut gens = scaled.basis().columns();
        gens.push(basis.column(i));
        lattices.push(Lattice::from_generators(ctx, d, gens)?);
    }
    let mut diag_sum = vec![Scalar::from_integer(0.into()); d];
    for i in 0..d {
        for (s, x) in diag_sum.iter_mut().zip(basis.column(i)) {
            *s += x;
        }
    }
    let mut gens = scaled.basis().columns();
    gens.push(diag_sum);
    lattices.push(Lattice::from_generators(ctx, d, gens)?);
    let classes: ClassSet = lattices.iter().map(class_of).collect();
    Ok(StarConfiguration {
        lattices,
        classes,
        collapsed: r == 0,
    })
}

/// The defining conditions of a star configuration, checked verbatim:
/// containment in the window, cyclic quotients, and recovery of the center
/// from every d-subset.
pub fn star_conditions_hold(
    center_basis: &RationalMatrix,
    r: i64,
    star: &StarConfiguration,
) -> bool {
    let ctx = star.lattices[0].ctx();
    let center = match Lattice::canonicalize(ctx, center_basis) {
        Ok(l) => l,
        Err(_) => return false,
    };
    let scaled = center.scale_p(r);
    let d = center.dim();
    if star.lattices.len() != d + 1 {
        return false;
    }
    for l in &star.lattices {
        if !center.contains(l) || !l.contains(&scaled) {
            return false;
        }
        // cyclic quotient of length r: elementary divisors (0, r, ..., r)
        let t = center
            .basis()
            .inverse()
            .expect("canonical basis invertible")
            .mul(l.basis());
        let vals = match smith_valuations(ctx, &t) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let mut expected = vec![r; d];
        expected[0] = 0;
        let mut sorted = vals;
        sorted.sort_unstable();
        let mut exp_sorted = expected;
        exp_sorted.sort_unstable();
        if sorted != exp_sorted {
            return false;
        }
    }
    for skip in 0..=d {
        let mut sum: Option<Lattice> = None;
        for (i, l) in star.lattices.iter().enumerate() {
            if i == skip {
                continue;
            }
            sum = Some(match sum {
                None => l.clone(),
                Some(s) => s.sum(l),
            });
        }
        if sum.expect("d >= 1") != center {
            return false;
        }
    }
    true
}

/// Generators witnessing that the bolytrope order needs at most d + 1
/// classes: the projective classes of the widened matrix plus one extra
/// lattice built from a frame basis of a central class.
pub fn bolystar_generators(apartment: &Apartment, m: &ExponentMatrix, r: i64) -> ClassSet {
    assert!(r >= 0, "radius must be nonnegative");
    let ctx = apartment.ctx();
    let d = m.d();
    let (proj, _) = projective_classes(apartment, &m.widen(r));
    if r == 0 {
        return proj;
    }
    let u = polytrope_points(m)
        .into_iter()
        .next()
        .expect("polytropes are nonempty");
    let center = apartment.lattice_at(&u);
    let mut diag_sum = vec![Scalar::from_integer(0.into()); d];
    for (j, uj) in u.iter().enumerate() {
        let f = ctx.p_pow(*uj);
        for (s, x) in diag_sum.iter_mut().zip(apartment.frame().column(j)) {
            *s += x * &f;
        }
    }
    let mut gens = center.scale_p(r).basis().columns();
    gens.push(diag_sum);
    let extra = class_of(&Lattice::from_generators(ctx, d, gens).expect("full rank"));
    proj.union(&ClassSet::singleton(extra))
}

/// If the order is exactly the graduated order of some exponent matrix in
/// this frame, returns that matrix.
pub fn is_graduated_in_frame(order: &Order, apartment: &Apartment) -> Option<ExponentMatrix> {
    let ctx = order.ctx();
    let d = order.matrix_dim();
    if apartment.dim() != d {
        return None;
    }
    let f = apartment.frame();
    let f_inv = apartment.frame_inv();
    let mut mins = vec![i64::MAX; d * d];
    for g in order.basis_matrices() {
        let y = f_inv.mul(g).mul(f);
        for i in 0..d {
            for j in 0..d {
                if let Some(v) = ctx.valuation(y.at(i, j)).finite() {
                    mins[i * d + j] = mins[i * d + j].min(v);
                }
            }
        }
    }
    if mins.contains(&i64::MAX) {
        return None;
    }
    let m = ExponentMatrix::new(d, mins).ok()?;
    let candidate = graduated_order(apartment, &m);
    (candidate.carrier() == order.carrier()).then_some(m)
}

/// Translation to the base-point normalization used for reporting: first
/// column zero, as in [[0, m], [0, 0]].
pub fn normalize_base_point(m: &ExponentMatrix) -> ExponentMatrix {
    let d = m.d();
    let entries = (0..d * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            m.at(i, j) + m.at(j, 0) - m.at(i, 0)
        })
        .collect();
    ExponentMatrix::new(d, entries).expect("translation preserves the region")
}

/// The first graduated term of the radical idealizer chain, with the frame
/// that exhibits it.
#[derive(Debug, Clone)]
pub struct CentralPolytrope {
    pub index: usize,
    /// Exponent matrix in the reporting normalization (first column zero).
    pub matrix: ExponentMatrix,
    /// Exponent matrix exactly as found in the frame.
    pub raw: ExponentMatrix,
    pub frame: Apartment,
}

/// Runs the radical idealizer chain and scans each term for a frame in which
/// it is graduated: the supplied frames first, then the standard frame, then
/// frames from compatible bases of pairs of invariant classes. The search is
/// bounded; exhaustion is an error, not a disproof.
pub fn central_polytrope(
    order: &Order,
    extra_frames: &[Apartment],
    cap: usize,
) -> Result<CentralPolytrope> {
    const PAIR_BUDGET: usize = 2000;
    let ctx = order.ctx();
    let d = order.matrix_dim();
    let chain = radical_idealizer_chain(order)?;
    for (index, term) in chain.iter().enumerate() {
        let mut candidates: Vec<Apartment> = extra_frames.to_vec();
        candidates.push(Apartment::standard(ctx, d));
        for frame in &candidates {
            if let Some(raw) = is_graduated_in_frame(term, frame) {
                return Ok(CentralPolytrope {
                    index,
                    matrix: normalize_base_point(&raw),
                    raw,
                    frame: frame.clone(),
                });
            }
        }
        let stable = invariant_classes(term, cap)?;
        let mut budget = PAIR_BUDGET;
        'pairs: for i in 0..stable.len() {
            for j in i + 1..stable.len() {
                if budget == 0 {
                    break 'pairs;
                }
                budget -= 1;
                let Ok((frame, _, _)) = compatible_bases(stable.get(i).rep(), stable.get(j).rep())
                else {
                    continue;
                };
                let Ok(apartment) = Apartment::new(ctx, frame) else {
                    continue;
                };
                if let Some(raw) = is_graduated_in_frame(term, &apartment) {
                    return Ok(CentralPolytrope {
                        index,
                        matrix: normalize_base_point(&raw),
                        raw,
                        frame: apartment,
                    });
                }
            }
        }
    }
    Err(Error::FrameSearchExhausted)
}

/// The exponent matrix carving out the nonempty slice of the invariant
/// classes through an apartment; `None` when the slice is empty. The
/// recovered polytrope is verified against the slice.
pub fn apartment_slice(
    order: &Order,
    apartment: &Apartment,
    cap: usize,
) -> Result<Option<ExponentMatrix>> {
    let stable = invariant_classes(order, cap)?;
    let d = order.matrix_dim();
    let mut slice: Vec<Vec<i64>> = Vec::new();
    for c in &stable {
        if let Ok(u) = apartment.exponent_vector(c) {
            slice.push(u);
        }
    }
    if slice.is_empty() {
        return Ok(None);
    }
    let mut entries = vec![i64::MIN; d * d];
    for u in &slice {
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = entries[i * d + j].max(u[i] - u[j]);
            }
        }
    }
    let m = ExponentMatrix::new(d, entries)
        .map_err(|e| Error::Inconsistency(format!("slice matrix invalid: {e}")))?;
    slice.sort();
    slice.dedup();
    if polytrope_points(&m) != slice {
        return Err(Error::Inconsistency(
            "apartment slice does not match its polytrope".into(),
        ));
    }
    Ok(Some(m))
}

/// The canonical shape of a closed order for d = 2: radius, segment length,
/// and a frame in which the order is exactly the bolytrope order of
/// [[0, m], [0, 0]] with the given radius.
#[derive(Debug, Clone)]
pub struct CanonicalD2 {
    pub r: i64,
    pub m: i64,
    pub frame: Apartment,
}

pub fn d2_canonical_form(order: &Order, cap: usize) -> Result<CanonicalD2> {
    let ctx = order.ctx();
    if order.matrix_dim() != 2 {
        return Err(Error::Domain("canonical form requires d = 2".into()));
    }
    let stable = invariant_classes(order, cap)?;
    if pz_order(&stable)?.carrier() != order.carrier() {
        return Err(Error::NotClosed);
    }
    // diameter by double sweep from the canonically first class (exact in trees)
    let sweep = |from: &LatticeClass| -> (LatticeClass, i64) {
        let mut best = from.clone();
        let mut best_d = 0;
        for c in &stable {
            let dist = from.distance(c);
            if dist > best_d {
                best = c.clone();
                best_d = dist;
            }
        }
        (best, best_d)
    };
    let (end1, _) = sweep(stable.get(0));
    let (end2, diameter) = sweep(&end1);
    let hull = crate::building::convex_hull(&ClassSet::new(vec![end1.clone(), end2.clone()]), cap)?;
    let radius = stable
        .iter()
        .map(|c| hull.distance_to(c))
        .max()
        .unwrap_or(0);
    let segment = diameter - 2 * radius;
    if segment < 0 {
        return Err(Error::Inconsistency("negative central segment".into()));
    }
    let (frame, _, v) = compatible_bases(end1.rep(), end2.rep())?;
    debug_assert_eq!(v[1] - v[0], diameter);
    // swap and rescale the frame so the ends land at (0, r) and (m + r, 0)
    let g = RationalMatrix::from_fn(2, 2, |i, j| {
        if j == 0 {
            frame.at(i, 1).clone()
        } else {
            frame.at(i, 0) * ctx.p_pow(-radius)
        }
    });
    let apartment = Apartment::new(ctx, g)?;
    let m = ExponentMatrix::from_rows(&[vec![0, segment], vec![0, 0]])?;
    let rebuilt = bolytrope_order(&apartment, &m, radius);
    if rebuilt.carrier() != order.carrier() {
        return Err(Error::Inconsistency(
            "closed order is not the bolytrope order of its invariants".into(),
        ));
    }
    Ok(CanonicalD2 {
        r: radius,
        m: segment,
        frame: apartment,
    })
}
