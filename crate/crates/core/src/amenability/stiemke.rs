//! Exact Stiemke alternative: either Mx = 0 has a solution with x > 0, or
//! some y has yᵀM ≥ 0 entrywise and nonzero.
//!
//! By scale invariance the first case is the linear program Mx = 0, x ≥ 1.
//! Writing x = 1 + s turns it into M s = -M·1, s ≥ 0, solved by phase one of
//! the simplex method with Bland's rule. When the artificial variables cannot
//! be driven out, the final simplex multipliers give the alternative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StiemkeOutcome {
    /// x with Mx = 0 and every entry positive.
    Primal(Vec<BigRational>),
    /// y with yᵀM ≥ 0 entrywise and not identically zero.
    Dual(Vec<BigRational>),
}

impl StiemkeOutcome {
    /// Re-checks the outcome against `m` by direct multiplication.
    pub fn verify(&self, m: &Matrix, cols: usize) -> bool {
        match self {
            StiemkeOutcome::Primal(x) => {
                x.len() == cols
                    && x.iter().all(|v| v.is_positive())
                    && m.iter().all(|row| dot(row, x).is_zero())
            }
            StiemkeOutcome::Dual(y) => {
                if y.len() != m.len() {
                    return false;
                }
                let yt_m = row_combination(m, y, cols);
                yt_m.iter().all(|v| !v.is_negative()) && yt_m.iter().any(|v| v.is_positive())
            }
        }
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// yᵀM.
pub fn row_combination(m: &Matrix, y: &[BigRational], cols: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); cols];
    for (row, c) in m.iter().zip(y) {
        if c.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o += c * v;
        }
    }
    out
}

/// Indices of rows forming a basis of the row space, earliest first.
fn independent_rows(m: &Matrix, cols: usize) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut r = row.clone();
        for (p, e) in &echelon {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = (0..cols).find(|&j| !r[j].is_zero()) {
            let inv = r[p].recip();
            for x in r.iter_mut() {
                *x *= &inv;
            }
            for (_, e) in echelon.iter_mut() {
                if !e[p].is_zero() {
                    let f = e[p].clone();
                    for (x, y) in e.iter_mut().zip(&r) {
                        *x -= &f * y;
                    }
                }
            }
            echelon.push((p, r));
            chosen.push(i);
        }
    }
    chosen
}

/// Scales a nonzero rational vector to coprime integers with the same signs.
pub fn to_primitive_integers(v: &[BigRational]) -> Vec<BigRational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

/// Decides the alternative for the `rows × cols` matrix `m`.
pub fn stiemke_solve(m: &Matrix, cols: usize) -> StiemkeOutcome {
    let ones = vec![BigRational::one(); cols];
    let basis_rows = independent_rows(m, cols);
    if basis_rows.is_empty() {
        return StiemkeOutcome::Primal(ones);
    }
    let r = basis_rows.len();
    let width = cols + r;
    // Constraint rows [σM' | I | σb] with b = -M'·1 and σ making b ≥ 0.
    let mut sign = Vec::with_capacity(r);
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(r);
    for (i, &ri) in basis_rows.iter().enumerate() {
        let row = &m[ri];
        let b = -dot(row, &ones);
        let s = if b.is_negative() { -BigRational::one() } else { BigRational::one() };
        let mut t: Vec<BigRational> = row.iter().map(|v| v * &s).collect();
        t.extend((0..r).map(|j| if j == i { BigRational::one() } else { BigRational::zero() }));
        t.push(b * &s);
        sign.push(s);
        tab.push(t);
    }
    // Reduced costs for the objective Σ artificials, with the (negated)
    // objective value in the last slot.
    let mut cost = vec![BigRational::zero(); width + 1];
    for j in 0..cols {
        cost[j] = -tab.iter().map(|t| t[j].clone()).sum::<BigRational>();
    }
    cost[width] = -tab.iter().map(|t| t[width].clone()).sum::<BigRational>();
    let mut basic: Vec<usize> = (cols..width).collect();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, t) in tab.iter().enumerate() {
            if !t[enter].is_positive() {
                continue;
            }
            let ratio = &t[width] / &t[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basic[i] < basic[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (p, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut cost, p, enter);
        basic[p] = enter;
    }

    if cost[width].is_zero() {
        let mut x = ones;
        for (i, &v) in basic.iter().enumerate() {
            if v < cols {
                x[v] += &tab[i][width];
            }
        }
        return StiemkeOutcome::Primal(x);
    }
    // Multipliers y*_i = 1 - (reduced cost of artificial i). They satisfy
    // y*ᵀ(σM') ≤ 0 and y*ᵀ(σb) > 0, so y = -σ y* gives yᵀM' ≩ 0.
    let mut y = vec![BigRational::zero(); m.len()];
    for (i, &ri) in basis_rows.iter().enumerate() {
        let ystar = BigRational::one() - &cost[cols + i];
        y[ri] = -(ystar * &sign[i]);
    }
    StiemkeOutcome::Dual(to_primitive_integers(&y))
}

fn pivot(tab: &mut [Vec<BigRational>], cost: &mut [BigRational], p: usize, c: usize) {
    let inv = tab[p][c].recip();
    for v in tab[p].iter_mut() {
        *v *= &inv;
    }
    let prow = tab[p].clone();
    for (i, t) in tab.iter_mut().enumerate() {
        if i == p || t[c].is_zero() {
            continue;
        }
        let f = t[c].clone();
        for (x, y) in t.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, y) in cost.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}
