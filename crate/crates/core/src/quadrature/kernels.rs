//! Per-interval overage and its expectation over an exponential idle time.
//!
//! For one inter-departure interval with previous system time `t` and
//! inter-departure time `y`, the age rises linearly from `t` to `t + y`.
//! `eps` is the time spent above `h`, `area` the area above `h`.

/// `[eps, area]` for an interval that starts at age `t` and lasts `y`.
pub(crate) fn interval(t: f64, y: f64, h: f64) -> [f64; 2] {
    if t >= h {
        [y, 0.5 * y * y + y * (t - h)]
    } else {
        let e = (t + y - h).max(0.0);
        [e, 0.5 * e * e]
    }
}

/// `E[interval(t, b + X, h)]` for `X ~ Exp(lambda)`, in closed form.
pub(crate) fn interval_after_idle(t: f64, b: f64, h: f64, lambda: f64) -> [f64; 2] {
    let inv = 1.0 / lambda;
    if t >= h {
        // E[Y] = b + 1/l, E[Y^2] = b^2 + 2b/l + 2/l^2
        let ey = b + inv;
        let ey2 = b * b + 2.0 * b * inv + 2.0 * inv * inv;
        return [ey, 0.5 * ey2 + ey * (t - h)];
    }
    let gap = h - t - b;
    if gap <= 0.0 {
        let m = -gap;
        [m + inv, 0.5 * (m * m + 2.0 * m * inv + 2.0 * inv * inv)]
    } else {
        // E[(X - gap)^+] = e^{-l gap}/l, E[((X - gap)^+)^2]/2 = e^{-l gap}/l^2
        let p = (-lambda * gap).exp();
        [p * inv, p * inv * inv]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_cases() {
        // case 2: peak above H, previous system time below H
        let [e, q] = interval(0.6, 2.8, 1.0);
        assert!((e - 2.4).abs() < 1e-12 && (q - 2.88).abs() < 1e-12);
        // case 3
        let [e, q] = interval(1.5, 0.7, 1.0);
        assert!((e - 0.7).abs() < 1e-12 && (q - 0.595).abs() < 1e-12);
        // case 1
        assert_eq!(interval(0.2, 0.3, 1.0), [0.0, 0.0]);
    }

    #[test]
    fn idle_expectation_matches_numeric_average() {
        // midpoint rule over the exponential quantile grid
        let (lambda, h) = (1.3, 1.0);
        for &(t, b) in &[(0.2, 0.1), (0.2, 0.9), (1.4, 0.3), (0.0, 0.0)] {
            let n = 200_000;
            let mut acc = [0.0; 2];
            for i in 0..n {
                let u = (i as f64 + 0.5) / n as f64;
                let x = -(1.0 - u).ln() / lambda;
                let v = interval(t, b + x, h);
                acc[0] += v[0];
                acc[1] += v[1];
            }
            let got = interval_after_idle(t, b, h, lambda);
            for k in 0..2 {
                let want = acc[k] / n as f64;
                assert!((got[k] - want).abs() < 2e-3 * want.max(1.0), "{t} {b} {k}");
            }
        }
    }
}
