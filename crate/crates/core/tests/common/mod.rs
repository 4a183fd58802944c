//! Independent dense oracles: plain `Vec<Complex64>` matrices, Kronecker
//! products and a Taylor-series exponential. Nothing here calls the crate's
//! own linear algebra.
#![allow(dead_code)]

use dbi_core::linalg::Operator;
use num_complex::Complex64;

pub type M = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

pub fn x() -> M {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn y() -> M {
    vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]
}

pub fn z() -> M {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn kron(a: &M, b: &M) -> M {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `op` on 1-based `site` of an `l`-qubit chain, site 1 leftmost.
pub fn on_site(op: &M, site: usize, l: usize) -> M {
    let id = eye(2);
    (1..=l).fold(vec![vec![c(1.0, 0.0)]], |acc, j| kron(&acc, if j == site { op } else { &id }))
}

pub fn add(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &M, k: Complex64) -> M {
    a.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

pub fn mul(a: &M, b: &M) -> M {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn comm(a: &M, b: &M) -> M {
    add(&mul(a, b), &scale(&mul(b, a), c(-1.0, 0.0)))
}

pub fn fro(a: &M) -> f64 {
    a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn off_diag_norm(a: &M) -> f64 {
    let mut s = 0.0;
    for (i, r) in a.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if i != j {
                s += x.norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn diag_part(a: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { a[i][j] } else { c(0.0, 0.0) }).collect()).collect()
}

/// `e^{A}` by scaling and squaring a 30-term Taylor series.
pub fn expm(a: &M) -> M {
    let n = a.len();
    let norm = fro(a);
    let mut k = 0;
    while norm / 2f64.powi(k) > 0.5 {
        k += 1;
    }
    let b = scale(a, c(1.0 / 2f64.powi(k), 0.0));
    let mut term = eye(n);
    let mut sum = eye(n);
    for m in 1..30 {
        term = scale(&mul(&term, &b), c(1.0 / m as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..k {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Double-bracket rotation `e^{sW} H e^{-sW}`, `W = [D, H]`.
pub fn dbr(h: &M, d: &M, s: f64) -> M {
    let w = comm(d, h);
    let u = expm(&scale(&w, c(s, 0.0)));
    mul(&mul(&u, h), &expm(&scale(&w, c(-s, 0.0))))
}

pub fn from_op(op: &Operator<f64>) -> M {
    let n = op.dim();
    (0..n).map(|i| (0..n).map(|j| op.get(i, j)).collect()).collect()
}

pub fn to_op(a: &M) -> Operator<f64> {
    let n = a.len();
    Operator::from_fn(n, |i, j| a[i][j]).unwrap()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn tfim(l: usize, h: f64) -> M {
    let n = 1 << l;
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for j in 1..=l {
        let k = j % l + 1;
        out = add(&out, &mul(&on_site(&x(), j, l), &on_site(&x(), k, l)));
        out = add(&out, &scale(&on_site(&z(), j, l), c(h, 0.0)));
    }
    out
}

pub fn xxz(l: usize, delta: f64) -> M {
    let n = 1 << l;
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for j in 1..=l {
        let k = j % l + 1;
        out = add(&out, &mul(&on_site(&x(), j, l), &on_site(&x(), k, l)));
        out = add(&out, &mul(&on_site(&y(), j, l), &on_site(&y(), k, l)));
        out = add(&out, &scale(&mul(&on_site(&z(), j, l), &on_site(&z(), k, l)), c(delta, 0.0)));
    }
    out
}
