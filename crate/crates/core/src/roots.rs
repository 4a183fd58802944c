//! Real-coefficient polynomial roots from the eigenvalues of the companion
//! matrix (balancing followed by Francis double-shift QR on the Hessenberg
//! form).

use crate::scalar::Real;

const MAX_QR_ITERATIONS: usize = 60;

/// Horner evaluation of `sum_k coeffs[k] x^k`.
pub(crate) fn eval_poly<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

pub(crate) fn derivative<T: Real>(coeffs: &[T]) -> Vec<T> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * T::of(k as f64))
        .collect()
}

/// Drops leading coefficients that are negligible against the largest one.
fn trim<T: Real>(coeffs: &[T]) -> &[T] {
    let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    let cutoff = scale * T::epsilon() * T::of(4.0);
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].abs() <= cutoff {
        end -= 1;
    }
    &coeffs[..end]
}

/// All complex roots `(re, im)` of `sum_k coeffs[k] x^k`.
///
/// Returns `None` when the QR iteration fails to converge. A polynomial that
/// is identically zero or constant has no roots.
pub(crate) fn polynomial_roots<T: Real>(coeffs: &[T]) -> Option<Vec<(T, T)>> {
    let coeffs = trim(coeffs);
    if coeffs.len() < 2 {
        return Some(Vec::new());
    }
    let m = coeffs.len() - 1;
    let lead = coeffs[m];
    // 1-based (m+1)x(m+1) storage keeps the QR code close to its textbook form.
    let mut a = vec![vec![T::zero(); m + 1]; m + 1];
    for k in 1..=m {
        a[1][k] = -coeffs[m - k] / lead;
    }
    for j in 2..=m {
        a[j][j - 1] = T::one();
    }
    balance(&mut a, m);
    let mut roots = hessenberg_eigenvalues(&mut a, m)?;
    for root in roots.iter_mut() {
        if root.1 == T::zero() {
            root.0 = polish(coeffs, root.0);
        }
    }
    Some(roots)
}

fn polish<T: Real>(coeffs: &[T], x0: T) -> T {
    let d = derivative(coeffs);
    let mut x = x0;
    let mut fx = eval_poly(coeffs, x).abs();
    for _ in 0..8 {
        let slope = eval_poly(&d, x);
        if slope == T::zero() {
            break;
        }
        let next = x - eval_poly(coeffs, x) / slope;
        let fnext = eval_poly(coeffs, next).abs();
        if !(fnext < fx) {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}

fn balance<T: Real>(a: &mut [Vec<T>], n: usize) {
    let radix = T::of(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < T::of(0.95) * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (1-based storage); destroys `a`.
fn hessenberg_eigenvalues<T: Real>(a: &mut [Vec<T>], n: usize) -> Option<Vec<(T, T)>> {
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let mut anorm = T::zero();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = T::zero();
    let (mut p, mut q, mut r);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = T::zero();
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = T::zero();
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = T::of(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= T::zero() {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return None;
                    }
                    if its == 10 || its == 20 || its == 40 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = T::of(0.75) * s;
                        y = x;
                        w = T::of(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s0;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = T::zero();
                        if i != m + 2 {
                            a[i][i - 3] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = T::zero();
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Some((1..=n).map(|i| (wr[i], wi[i])).collect())
}
