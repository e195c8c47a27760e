//! Linear algebra over the prime residue field F_p: row reduction, kernels,
//! division-free characteristic polynomials, and enumeration of subspaces by
//! reduced row-echelon representatives.

/// Dense matrix over F_p with entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

pub fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

pub fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub fn fp_inv(a: u64, p: u64) -> u64 {
    // extended euclid; a must be nonzero mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = fp_mul(a, other.at(k, j), self.p);
                    out.data[i * other.cols + j] = fp_add(out.data[i * other.cols + j], t, self.p);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = 0;
                for j in 0..self.cols {
                    s = fp_add(s, fp_mul(self.at(i, j), v[j], self.p), self.p);
                }
                s
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, row * self.cols + j);
                }
            }
            let inv = fp_inv(self.at(row, col), self.p);
            for j in 0..self.cols {
                let v = fp_mul(self.at(row, j), inv, self.p);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col) == 0 {
                    continue;
                }
                let f = self.at(r, col);
                for j in 0..self.cols {
                    let v = fp_sub(self.at(r, j), fp_mul(f, self.at(row, j), self.p), self.p);
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut x = vec![0u64; self.cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = fp_sub(0, m.at(r, free), self.p);
            }
            basis.push(x);
        }
        basis
    }

    /// Characteristic polynomial of a square matrix by the Berkowitz method
    /// (division-free). Returns coefficients of det(tI - M) from the leading
    /// term down: `c[0] = 1`, `c[k]` the coefficient of `t^(n-k)`.
    pub fn charpoly(&self) -> Vec<u64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut c = vec![1u64];
        for r in 1..=n {
            // first column of the Toeplitz factor
            let mut q = vec![0u64; r + 1];
            q[0] = 1;
            q[1] = fp_sub(0, self.at(r - 1, r - 1), p);
            if r >= 2 {
                let row: Vec<u64> = (0..r - 1).map(|j| self.at(r - 1, j)).collect();
                let mut v: Vec<u64> = (0..r - 1).map(|i| self.at(i, r - 1)).collect();
                for k in 2..=r {
                    let dot = row
                        .iter()
                        .zip(v.iter())
                        .fold(0u64, |acc, (a, b)| fp_add(acc, fp_mul(*a, *b, p), p));
                    q[k] = fp_sub(0, dot, p);
                    if k < r {
                        // v <- A_{r-1} v
                        let mut next = vec![0u64; r - 1];
                        for i in 0..r - 1 {
                            let mut s = 0;
                            for j in 0..r - 1 {
                                s = fp_add(s, fp_mul(self.at(i, j), v[j], p), p);
                            }
                            next[i] = s;
                        }
                        v = next;
                    }
                }
            }
            let mut next_c = vec![0u64; r + 1];
            for (i, nc) in next_c.iter_mut().enumerate() {
                let mut s = 0;
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < q.len() {
                        s = fp_add(s, fp_mul(q[i - j], *cj, p), p);
                    }
                }
                *nc = s;
            }
            c = next_c;
        }
        c
    }
}

/// All reduced row-echelon bases of k-dimensional subspaces of F_p^d,
/// each as k rows of length d. Deterministic order.
pub fn rref_subspace_bases(p: u64, d: usize, k: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivot_cols = Vec::new();
    choose_pivots(p, d, k, 0, &mut pivot_cols, &mut out);
    out
}

fn choose_pivots(
    p: u64,
    d: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Vec<Vec<u64>>>,
) {
    if pivots.len() == k {
        fill_free_entries(p, d, pivots, out);
        return;
    }
    for c in start..d {
        pivots.push(c);
        choose_pivots(p, d, k, c + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free_entries(p: u64, d: usize, pivots: &[usize], out: &mut Vec<Vec<Vec<u64>>>) {
    let k = pivots.len();
    // free positions: (row t, col j) with j > pivots[t] and j not a pivot
    let mut free = Vec::new();
    for (t, &pc) in pivots.iter().enumerate() {
        for j in pc + 1..d {
            if !pivots.contains(&j) {
                free.push((t, j));
            }
        }
    }
    let mut values = vec![0u64; free.len()];
    loop {
        let mut rows = vec![vec![0u64; d]; k];
        for (t, &pc) in pivots.iter().enumerate() {
            rows[t][pc] = 1;
        }
        for (idx, &(t, j)) in free.iter().enumerate() {
            rows[t][j] = values[idx];
        }
        out.push(rows);
        // odometer over F_p^free
        let mut i = 0;
        loop {
            if i == values.len() {
                return;
            }
            values[i] += 1;
            if values[i] < p {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

/// Number of k-dimensional subspaces of F_p^d (Gaussian binomial).
pub fn gaussian_binomial(d: usize, k: usize, p: u64) -> u64 {
    let q = |e: usize| -> u128 { (p as u128).pow(e as u32) };
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q(d - i) - 1;
        den *= q(k - i) - 1;
    }
    (num / den) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_p() {
        assert_eq!(fp_inv(3, 5), 2);
        assert_eq!(fp_inv(1, 2), 1);
        assert_eq!(fp_inv(4, 7), 2);
    }

    #[test]
    fn rref_and_kernel() {
        let mut m = FpMatrix::zeros(2, 2, 3);
        m.set(0, 0, 1);
        m.set(0, 1, 1);
        m.set(1, 1, 1);
        m.set(1, 2, 1);
        let pivots = m.clone().rref();
        assert_eq!(pivots, vec![0, 1]);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for v in kernel {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn charpoly_small_cases() {
        // diag(1, 2) over F_5: t^2 - 3t + 2
        let mut m = FpMatrix::zeros(5, 2, 2);
        m.set(0, 0, 1);
        m.set(1, 1, 2);
        assert_eq!(m.charpoly(), vec![1, 2, 2]); // -3 = 2 mod 5

        // nilpotent over F_2
        let mut n = FpMatrix::zeros(2, 2, 2);
        n.set(0, 1, 1);
        assert_eq!(n.charpoly(), vec![1, 0, 0]);

        // companion of t^2 + t + 1 over F_2
        let mut c = FpMatrix::zeros(2, 2, 2);
        c.set(0, 1, 1);
        c.set(1, 0, 1);
        c.set(1, 1, 1);
        assert_eq!(c.charpoly(), vec![1, 1, 1]);
    }

    #[test]
    fn charpoly_matches_trace_and_det_mod_p() {
        // 3x3 over F_3
        let mut m = FpMatrix::zeros(3, 3, 3);
        let vals = [[1, 2, 0], [0, 1, 1], [2, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, vals[i][j]);
            }
        }
        let c = m.charpoly();
        assert_eq!(c[0], 1);
        // trace = 3 = 0 mod 3, so c1 = 0
        assert_eq!(c[1], 0);
        // det = 1*(1-0) - 2*(0-2) + 0 = 5 = 2 mod 3; c3 = (-1)^3 det = -2 = 1
        assert_eq!(c[3], 1);
    }

    #[test]
    fn subspace_enumeration_counts() {
        assert_eq!(rref_subspace_bases(2, 2, 1).len() as u64, 3);
        assert_eq!(rref_subspace_bases(3, 2, 1).len() as u64, 4);
        assert_eq!(rref_subspace_bases(2, 3, 1).len() as u64, 7);
        assert_eq!(rref_subspace_bases(2, 3, 2).len() as u64, 7);
        for (d, k, p) in [(4, 2, 2u64), (3, 1, 5), (4, 3, 3)] {
            assert_eq!(
                rref_subspace_bases(p, d, k).len() as u64,
                gaussian_binomial(d, k, p)
            );
        }
    }

    #[test]
    fn subspace_bases_have_full_rank() {
        for rows in rref_subspace_bases(3, 3, 2) {
            let mut m = FpMatrix::zeros(3, 2, 3);
            for (i, r) in rows.iter().enumerate() {
                for (j, &v) in r.iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            assert_eq!(m.rank(), 2);
        }
    }
}
