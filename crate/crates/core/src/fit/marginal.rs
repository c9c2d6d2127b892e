//! Univariate right-censored Weibull maximum likelihood, used to initialize
//! the joint fit.

/// `(scale, shape)` estimate for one coordinate, or `None` when there are no
/// observed events.
///
/// For a fixed shape `g` the scale maximizing the likelihood satisfies
/// `scale^g = sum t^g / d` (`d` = number of events); the shape solves the
/// profile score equation
///
/// ```text
/// sum t^g ln t / sum t^g - 1/g - mean_{events} ln t = 0,
/// ```
///
/// whose left side increases in `g`. It is solved by bisection on `ln g`.
pub fn weibull_mle(times: &[f64], events: &[bool]) -> Option<(f64, f64)> {
    let d = events.iter().filter(|e| **e).count();
    if d == 0 || times.is_empty() {
        return None;
    }
    // Work with t / max(t) so that t^g stays representable for large shapes.
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let logs: Vec<f64> = times.iter().map(|t| (t / t_max).ln()).collect();
    let event_log_mean = logs
        .iter()
        .zip(events)
        .filter(|(_, e)| **e)
        .map(|(l, _)| l)
        .sum::<f64>()
        / d as f64;

    let score = |g: f64| {
        let (mut s0, mut s1) = (0.0, 0.0);
        for &l in &logs {
            let w = (g * l).exp();
            s0 += w;
            s1 += w * l;
        }
        s1 / s0 - 1.0 / g - event_log_mean
    };

    let (mut lo, mut hi) = ((1e-3f64).ln(), (1e3f64).ln());
    if score(hi.exp()) < 0.0 {
        lo = hi;
    } else if score(lo.exp()) > 0.0 {
        hi = lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if score(mid.exp()) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let shape = (0.5 * (lo + hi)).exp();
    let s0: f64 = logs.iter().map(|l| (shape * l).exp()).sum();
    let scale = t_max * (s0 / d as f64).powf(1.0 / shape);
    Some((scale, shape))
}
