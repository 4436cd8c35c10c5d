use crate::vprec::Real;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton's
/// method on the three-term recurrence in the working type.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "at least one quadrature point");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let one = T::one();
    let two = T::from_int(2);
    let tol = one.ldexp(-(T::BASE_BITS as i64) + 3);
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = T::from_f(guess);
        let mut dp = T::one();
        for it in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= tol && it > 1 {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        let w = two / ((one - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))`.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    if n == 0 {
        return (one, T::zero());
    }
    for k in 2..=n {
        let kk = T::from_int(k as i64);
        let p2 = (T::from_int(2 * k as i64 - 1) * x * p1 - T::from_int(k as i64 - 1) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    let nn = T::from_int(n as i64);
    let d = nn * (x * p1 - p0) / (x * x - one);
    (p1, d)
}
