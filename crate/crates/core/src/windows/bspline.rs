/// Centred cardinal B-spline of degree `n`: the (n+1)-fold convolution of 1_[-1/2, 1/2).
///
/// `bspline(1, ·)` is the hat function on [-1, 1]. Evaluated with the Cox–de Boor
/// recursion on the integer knots of [0, n+1].
pub fn bspline(n: usize, x: f64) -> f64 {
    let u = x + (n as f64 + 1.0) / 2.0;
    if u < 0.0 || u >= n as f64 + 1.0 || u.is_nan() {
        return 0.0;
    }
    let i = u.floor() as i64;
    let mut vals = vec![1.0];
    for d in 1..=n {
        let df = d as f64;
        let mut next = vec![0.0; d + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            // next[m] is N_j of degree d with j = i - d + m; vals[m - 1] is N_j, vals[m] is N_{j+1}.
            let j = (i - d as i64 + m as i64) as f64;
            let left = if m >= 1 { vals[m - 1] } else { 0.0 };
            let right = if m < d { vals[m] } else { 0.0 };
            *slot = (u - j) / df * left + (j + df + 1.0 - u) / df * right;
        }
        vals = next;
    }
    vals[(n as i64 - i) as usize]
}

/// Knots of `bspline(n, ·)`: the points -(n+1)/2 + k.
pub fn knots(n: usize) -> Vec<f64> {
    (0..=n + 1).map(|k| k as f64 - (n as f64 + 1.0) / 2.0).collect()
}
