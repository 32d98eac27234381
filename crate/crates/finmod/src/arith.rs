//! Integer matrix kernels used by the lattice representation of subgroups:
//! Hermite normal form, integer row kernels, and Smith normal form with
//! tracked column transforms. Sizes are tiny (rank <= ~32, entries bounded by
//! the ambient order), so everything works in `i128` without modular tricks.

use num_integer::Integer;

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn row_submul(rows: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    if q == 0 {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

/// Row-style Hermite normal form of a full-rank set of generator rows in
/// `Z^k`. Returns the unique `k x k` upper-triangular basis with positive
/// pivots and entries above each pivot reduced into `[0, pivot)`.
///
/// Callers guarantee full rank by appending the diagonal relation rows of the
/// ambient group before calling.
pub fn hnf_full_rank(mut rows: Mat, k: usize) -> Mat {
    let m = rows.len();
    assert!(m >= k, "need at least k generator rows");
    let mut r = 0;
    for c in 0..k {
        let piv = (r..m).find(|&i| rows[i][c] != 0);
        let piv = piv.expect("generator rows are not full rank");
        rows.swap(r, piv);
        for i in (r + 1)..m {
            while rows[i][c] != 0 {
                let q = rows[r][c] / rows[i][c];
                row_submul(&mut rows, r, i, q);
                rows.swap(r, i);
            }
        }
        if rows[r][c] < 0 {
            for x in rows[r].iter_mut() {
                *x = -*x;
            }
        }
        r += 1;
    }
    // Reduce entries above each pivot into [0, pivot).
    for j in (0..k).rev() {
        let p = rows[j][j];
        debug_assert!(p > 0);
        for i in 0..j {
            let q = rows[i][j].div_euclid(p);
            row_submul(&mut rows, i, j, q);
        }
    }
    rows.truncate(k);
    rows
}

/// Basis of the left kernel `{ z : z * mat = 0 }` of an integer matrix.
pub fn row_kernel(mut mat: Mat) -> Mat {
    let m = mat.len();
    let n = if m == 0 { 0 } else { mat[0].len() };
    let mut u = identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(piv) = (r..m).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, piv);
        u.swap(r, piv);
        for i in (r + 1)..m {
            while mat[i][c] != 0 {
                let q = mat[r][c] / mat[i][c];
                row_submul(&mut mat, r, i, q);
                row_submul(&mut u, r, i, q);
                mat.swap(r, i);
                u.swap(r, i);
            }
        }
        r += 1;
    }
    u.drain(..r);
    u
}

/// Smith normal form of a square full-rank matrix. Returns the positive
/// diagonal `s` with `s[0] | s[1] | ...` together with the column transform
/// `v` and its inverse, so that `u * a * v = diag(s)` for some unimodular `u`
/// (which is not returned; row operations are untracked).
pub fn snf_with_v(mut a: Mat) -> (Vec<i128>, Mat, Mat) {
    let k = a.len();
    let mut v = identity(k);
    let mut vinv = identity(k);

    let col_submul = |a: &mut Mat, v: &mut Mat, vinv: &mut Mat, dst: usize, src: usize, q: i128| {
        if q == 0 {
            return;
        }
        for row in a.iter_mut() {
            let s = row[src];
            row[dst] -= q * s;
        }
        for row in v.iter_mut() {
            let s = row[src];
            row[dst] -= q * s;
        }
        // inverse op: row src += q * row dst
        row_submul(vinv, src, dst, -q);
    };
    let col_swap = |a: &mut Mat, v: &mut Mat, vinv: &mut Mat, j1: usize, j2: usize| {
        if j1 == j2 {
            return;
        }
        for row in a.iter_mut() {
            row.swap(j1, j2);
        }
        for row in v.iter_mut() {
            row.swap(j1, j2);
        }
        vinv.swap(j1, j2);
    };

    let mut t = 0;
    while t < k {
        // Select the smallest nonzero entry of the trailing submatrix as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..k {
                if a[i][j] != 0
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let (bi, bj) = best.expect("matrix is not full rank");
        a.swap(t, bi);
        col_swap(&mut a, &mut v, &mut vinv, t, bj);

        let mut dirty = false;
        for i in (t + 1)..k {
            if a[i][t] != 0 {
                let q = a[i][t].div_euclid(a[t][t]);
                row_submul(&mut a, i, t, q);
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
        }
        for j in (t + 1)..k {
            if a[t][j] != 0 {
                let q = a[t][j].div_euclid(a[t][t]);
                col_submul(&mut a, &mut v, &mut vinv, j, t, q);
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // Pivot divides the rest of its row/column; enforce that it divides
        // the whole trailing submatrix before moving on.
        let p = a[t][t];
        let mut fixed = true;
        'scan: for i in (t + 1)..k {
            for j in (t + 1)..k {
                if a[i][j] % p != 0 {
                    row_submul(&mut a, t, i, -1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
            }
            t += 1;
        }
    }
    let s: Vec<i128> = (0..k).map(|i| a[i][i]).collect();
    debug_assert!(s.iter().all(|&x| x > 0));
    debug_assert!(s.windows(2).all(|w| w[1] % w[0] == 0));
    (s, v, vinv)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

pub fn lcm_i128(a: i128, b: i128) -> i128 {
    a.lcm(&b)
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

/// Distinct prime factors of `n > 0`, ascending.
pub fn prime_factors(mut n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Product of the distinct prime factors of `n > 0`.
pub fn radical_of(n: i128) -> i128 {
    prime_factors(n).iter().product::<i128>().max(1)
}
