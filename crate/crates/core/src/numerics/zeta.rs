/// Hurwitz zeta `sum_{k >= start} k^(-s)` for `s > 1` and integer `start >= 1`.
///
/// Terms below a cutoff are summed directly; the rest uses the
/// Euler–Maclaurin expansion, which is accurate to double precision once the
/// cutoff is in the thousands.
pub fn hurwitz_zeta(s: f64, start: u64) -> f64 {
    assert!(s > 1.0, "series diverges for s <= 1");
    assert!(start >= 1, "start index must be positive");
    const CUTOFF: u64 = 2000;
    let mut direct = 0.0;
    let mut k = start;
    while k < start.max(CUTOFF) {
        direct += (k as f64).powf(-s);
        k += 1;
    }
    direct + euler_maclaurin_tail(s, k as f64)
}

/// `sum_{k >= n} k^(-s)` by Euler–Maclaurin; `n` should be large.
fn euler_maclaurin_tail(s: f64, n: f64) -> f64 {
    let a = n.powf(-s);
    let mut v = n * a / (s - 1.0) + 0.5 * a;
    v += s * a / (12.0 * n);
    v -= s * (s + 1.0) * (s + 2.0) * a / (720.0 * n.powi(3));
    v += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * a / (30240.0 * n.powi(5));
    v
}
