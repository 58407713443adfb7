//! Exact linear algebra: Gaussian elimination over fields, Smith normal form
//! over the integers, and invariants of subquotients ker(T)/im(S).
//!
//! Over Z/n the invariants are computed by lifting to integer lattices:
//! ker(T mod n) is the projection of an integer kernel, and the quotient is
//! presented by an integer coordinate matrix whose Smith form gives the
//! invariant factors.

use crate::matrix::Mat;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;

pub fn zmat_identity(n: usize) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn zmat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let m = a.len();
    let k = if m == 0 { 0 } else { a[0].len() };
    let n = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[t][j].is_zero() {
                    continue;
                }
                let p = &a[i][t] * &b[t][j];
                out[i][j] += p;
            }
        }
    }
    out
}

/// Smith normal form `u * a * v = diag(d)` with `d[i]` dividing `d[i+1]`,
/// all `d[i] >= 0`. `uinv` is the inverse of `u`, tracked during elimination.
pub struct Snf {
    pub d: Vec<BigInt>,
    pub u: ZMat,
    pub uinv: ZMat,
    pub v: ZMat,
    pub rows: usize,
    pub cols: usize,
}

pub fn snf(a: &ZMat) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut w = a.clone();
    let mut u = zmat_identity(m);
    let mut uinv = zmat_identity(m);
    let mut v = zmat_identity(n);

    let swap_rows = |w: &mut ZMat, u: &mut ZMat, uinv: &mut ZMat, i: usize, j: usize| {
        w.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    };
    let swap_cols = |w: &mut ZMat, v: &mut ZMat, i: usize, j: usize| {
        for row in w.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_j -= q * row_i
    let add_row = |w: &mut ZMat, u: &mut ZMat, uinv: &mut ZMat, i: usize, j: usize, q: &BigInt| {
        for c in 0..n {
            let t = q * &w[i][c];
            w[j][c] -= t;
        }
        for c in 0..m {
            let t = q * &u[i][c];
            u[j][c] -= t;
        }
        // uinv <- uinv * (row op)^{-1}: column i += q * column j
        for r in 0..m {
            let t = q * &uinv[r][j];
            uinv[r][i] += t;
        }
    };
    // col_j -= q * col_i
    let add_col = |w: &mut ZMat, v: &mut ZMat, i: usize, j: usize, q: &BigInt| {
        for row in w.iter_mut() {
            let t = q * &row[i];
            row[j] -= t;
        }
        for row in v.iter_mut() {
            let t = q * &row[i];
            row[j] -= t;
        }
    };

    let mut t = 0usize;
    while t < m.min(n) {
        // locate a smallest-magnitude nonzero pivot in the trailing block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w[i][j].is_zero() {
                    let better = match piv {
                        None => true,
                        Some((pi, pj)) => w[i][j].abs() < w[pi][pj].abs(),
                    };
                    if better {
                        piv = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        if pi != t {
            swap_rows(&mut w, &mut u, &mut uinv, pi, t);
        }
        if pj != t {
            swap_cols(&mut w, &mut v, pj, t);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !w[i][t].is_zero() {
                    let q = &w[i][t] / &w[t][t];
                    if !q.is_zero() {
                        add_row(&mut w, &mut u, &mut uinv, t, i, &q);
                    }
                    if !w[i][t].is_zero() {
                        // remainder became the smaller pivot
                        swap_rows(&mut w, &mut u, &mut uinv, i, t);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !w[t][j].is_zero() {
                    let q = &w[t][j] / &w[t][t];
                    if !q.is_zero() {
                        add_col(&mut w, &mut v, t, j, &q);
                    }
                    if !w[t][j].is_zero() {
                        swap_cols(&mut w, &mut v, j, t);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot now divides its row and column remainders (all zero);
            // enforce divisibility of the whole trailing block
            let mut fixed = true;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&w[i][j] % &w[t][t]).is_zero() {
                        let one = BigInt::from(-1);
                        add_row(&mut w, &mut u, &mut uinv, i, t, &one); // row_t += row_i
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if w[t][t].is_negative() {
            for c in 0..n {
                w[t][c] = -w[t][c].clone();
            }
            for c in 0..m {
                u[t][c] = -u[t][c].clone();
            }
            for r in 0..m {
                uinv[r][t] = -uinv[r][t].clone();
            }
        }
        t += 1;
    }

    let d = (0..m.min(n)).map(|i| w[i][i].clone()).collect();
    Snf { d, u, uinv, v, rows: m, cols: n }
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// Basis of the (saturated) integer kernel lattice, as columns.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let r = self.rank();
        (r..self.cols)
            .map(|j| (0..self.cols).map(|i| self.v[i][j].clone()).collect())
            .collect()
    }

    /// One integer solution of `a * x = b`, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let ub: Vec<BigInt> = (0..self.rows)
            .map(|i| (0..self.rows).map(|j| &self.u[i][j] * &b[j]).sum())
            .collect();
        let r = self.rank();
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            if i < r {
                if !(&ub[i] % &self.d[i]).is_zero() {
                    return None;
                }
                if i < self.cols {
                    y[i] = &ub[i] / &self.d[i];
                }
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        let x = (0..self.cols)
            .map(|i| (0..self.cols).map(|j| &self.v[i][j] * &y[j]).sum())
            .collect();
        Some(x)
    }

    /// Basis (as columns) of the lattice spanned by the columns of `a`.
    pub fn column_lattice_basis(&self) -> Vec<Vec<BigInt>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..self.rows)
                    .map(|row| &self.uinv[row][i] * &self.d[i])
                    .collect()
            })
            .collect()
    }
}

pub fn int_kernel_basis(a: &ZMat) -> Vec<Vec<BigInt>> {
    snf(a).kernel_basis()
}

pub fn int_rank(a: &ZMat) -> usize {
    snf(a).rank()
}

/// Reduced row echelon form in place; ring must be a field.
/// Returns the pivot column indices.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let ring = m.ring.clone();
    assert!(ring.is_field(), "rref requires a field");
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..m.cols {
        let mut sel = None;
        for i in r..m.rows {
            if !ring.is_zero(m.get(i, c)) {
                sel = Some(i);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        if sel != r {
            for j in 0..m.cols {
                let a = m.get(sel, j).clone();
                let b = m.get(r, j).clone();
                m.set(sel, j, b);
                m.set(r, j, a);
            }
        }
        let inv = ring.inv(m.get(r, c)).expect("field inverse");
        for j in 0..m.cols {
            let v = ring.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i != r && !ring.is_zero(m.get(i, c)) {
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = ring.sub(m.get(i, j), &ring.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.rows {
            break;
        }
    }
    pivots
}

pub fn rank_field(m: &Mat) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Rank over the ring's fraction field: fields directly, Z via Q.
pub fn rank(m: &Mat) -> usize {
    match m.ring {
        Ring::Integers => {
            let a = m.lift_to_int().expect("integer matrix");
            int_rank(&a)
        }
        _ => rank_field(m),
    }
}

/// Kernel basis over a field, as columns of the returned matrix.
pub fn kernel_basis_field(m: &Mat) -> Mat {
    let ring = m.ring.clone();
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut out = Mat::zeros(ring.clone(), m.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        out.set(fc, k, ring.one());
        for (pr, &pc) in pivots.iter().enumerate() {
            let v = w.get(pr, fc).clone();
            out.set(pc, k, ring.neg(&v));
        }
    }
    out
}

/// Solve `a * x = b` over a field for matrix right-hand sides.
/// Returns one solution (free variables zero), or None when inconsistent.
pub fn solve_field(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows, b.rows);
    let ring = a.ring.clone();
    let mut aug = a.hstack(b);
    let pivots = rref(&mut aug);
    if pivots.iter().any(|&c| c >= a.cols) {
        return None;
    }
    let mut x = Mat::zeros(ring, a.cols, b.cols);
    for (pr, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, aug.get(pr, a.cols + j).clone());
        }
    }
    Some(x)
}

/// Solve `a * x = b` over the integers (one solution or None).
pub fn solve_int(a: &ZMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    snf(a).solve(b)
}

/// Invariants of a finitely generated module: free rank plus invariant
/// factors (each dividing the next) of the torsion part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleInvariants {
    pub fn zero() -> Self {
        ModuleInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("free^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("cyclic({t})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn invariants_of_quotient(coords: &ZMat, ambient_rank: usize) -> ModuleInvariants {
    if ambient_rank == 0 {
        return ModuleInvariants::zero();
    }
    if coords.is_empty() || coords[0].is_empty() {
        return ModuleInvariants { free_rank: ambient_rank, torsion: Vec::new() };
    }
    let s = snf(coords);
    let torsion: Vec<BigInt> = s
        .d
        .iter()
        .filter(|x| !x.is_zero() && !x.is_one())
        .cloned()
        .collect();
    ModuleInvariants {
        free_rank: ambient_rank - s.rank(),
        torsion,
    }
}

/// Invariants of ker(T)/im(S) where T: R^m -> R^r and S: R^q -> R^m with
/// T*S = 0. Both matrices must share the ring.
pub fn subquotient_invariants(t: &Mat, s: &Mat) -> ModuleInvariants {
    assert_eq!(t.ring, s.ring, "subquotient ring mismatch");
    assert_eq!(t.cols, s.rows, "subquotient shape mismatch");
    debug_assert!(t.mul(s).is_zero(), "image not contained in kernel");
    let m = t.cols;
    match &t.ring {
        Ring::Rationals | Ring::PrimeField(_) => {
            let free = (m - rank_field(t)) - rank_field(s);
            ModuleInvariants { free_rank: free, torsion: Vec::new() }
        }
        Ring::Integers => {
            let tz = t.lift_to_int().expect("integer matrix");
            let kernel: Vec<Vec<BigInt>> = if t.rows == 0 {
                (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                            .collect()
                    })
                    .collect()
            } else {
                int_kernel_basis(&tz)
            };
            let k = kernel.len();
            if k == 0 {
                return ModuleInvariants::zero();
            }
            // m x k basis matrix of the kernel lattice
            let basis: ZMat = (0..m)
                .map(|i| (0..k).map(|j| kernel[j][i].clone()).collect())
                .collect();
            let basis_snf = snf(&basis);
            let sz = s.lift_to_int().expect("integer matrix");
            let mut coords: ZMat = vec![vec![BigInt::zero(); s.cols]; k];
            for j in 0..s.cols {
                let col: Vec<BigInt> = (0..m).map(|i| sz[i][j].clone()).collect();
                let y = basis_snf
                    .solve(&col)
                    .expect("image vector outside kernel lattice");
                for i in 0..k {
                    coords[i][j] = y[i].clone();
                }
            }
            invariants_of_quotient(&coords, k)
        }
        Ring::IntegersMod(n) => {
            let n_big = BigInt::from(*n);
            let tz = t.lift_to_int().expect("residue matrix");
            let r = t.rows;
            // kernel lattice of x -> Tx mod n: project ker [T | nI] to x-part
            let mut ext: ZMat = Vec::with_capacity(r);
            for i in 0..r {
                let mut row = tz[i].clone();
                for j in 0..r {
                    row.push(if i == j { n_big.clone() } else { BigInt::zero() });
                }
                ext.push(row);
            }
            let gens: Vec<Vec<BigInt>> = if r == 0 {
                // no constraints: kernel is everything
                (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                            .collect()
                    })
                    .collect()
            } else {
                int_kernel_basis(&ext)
                    .into_iter()
                    .map(|v| v[..m].to_vec())
                    .collect()
            };
            let gen_mat: ZMat = (0..m)
                .map(|i| gens.iter().map(|g| g[i].clone()).collect())
                .collect();
            let lattice = snf(&gen_mat).column_lattice_basis();
            let k = lattice.len();
            assert_eq!(k, m, "kernel lattice mod n must have full rank");
            let basis: ZMat = (0..m)
                .map(|i| (0..k).map(|j| lattice[j][i].clone()).collect())
                .collect();
            let basis_snf = snf(&basis);
            let sz = s.lift_to_int().expect("residue matrix");
            let total = s.cols + m;
            let mut coords: ZMat = vec![vec![BigInt::zero(); total]; k];
            for j in 0..total {
                let col: Vec<BigInt> = if j < s.cols {
                    (0..m).map(|i| sz[i][j].clone()).collect()
                } else {
                    (0..m)
                        .map(|i| if i == j - s.cols { n_big.clone() } else { BigInt::zero() })
                        .collect()
                };
                let y = basis_snf
                    .solve(&col)
                    .expect("denominator outside kernel lattice");
                for i in 0..k {
                    coords[i][j] = y[i].clone();
                }
            }
            invariants_of_quotient(&coords, k)
        }
    }
}
