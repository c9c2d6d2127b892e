//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mvweibull::ModelParams;
use rand::Rng;

/// Survival function written out directly, without going through the
/// library's log-space evaluation.
pub fn survival_direct(p: &ModelParams, x: &[f64]) -> f64 {
    let a = p.alpha();
    let t: f64 = x
        .iter()
        .zip(p.scales().iter().zip(p.shapes()))
        .map(|(xi, (l, g))| (xi / l).powf(g / a))
        .sum();
    (-t.powf(a)).exp()
}

pub fn weibull_cdf(x: f64, scale: f64, shape: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-(x / scale).powf(shape)).exp_m1()
    }
}

pub fn weibull_quantile(q: f64, scale: f64, shape: f64) -> f64 {
    scale * (-(-q).ln_1p()).powf(1.0 / shape)
}

/// Random parameters in a well-conditioned region: scales in (0.5, 2),
/// shapes in (1, 3).
pub fn random_params<R: Rng>(rng: &mut R, n: usize, alpha: f64) -> ModelParams {
    let scales = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let shapes = (0..n).map(|_| rng.random_range(1.0..3.0)).collect();
    ModelParams::new(alpha, scales, shapes).unwrap()
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive bisection: repeatedly splits the subinterval with the
/// largest error estimate until the summed estimate is below `tol` or
/// `MAX_INTERVALS` is reached.
const MAX_INTERVALS: usize = 400;

fn adaptive<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> f64 {
    let (v, e) = gauss_kronrod(f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= tol || parts.len() >= MAX_INTERVALS {
            return parts.iter().map(|p| p.2).sum();
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3))
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod(f, lo, mid);
        let (v2, e2) = gauss_kronrod(f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Adaptive 7/15-point Gauss–Kronrod over `[a, b]` with absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive(&mut f, a, b, tol)
}

/// Integral over `[a, b]` split at the interior points in `breaks`.
pub fn integrate_split<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    let pieces = (points.len() - 1) as f64;
    points
        .windows(2)
        .map(|w| adaptive(&mut f, w[0], w[1], tol / pieces))
        .sum()
}

/// Asymptotic Kolmogorov p-value for a one-sample KS statistic `d` from `n` draws.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let t = (sn + 0.12 + 0.11 / sn) * d;
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * t * t).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// One-sample KS statistic of `data` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(data: &mut [f64], cdf: F) -> f64 {
    data.sort_by(f64::total_cmp);
    let n = data.len() as f64;
    data.iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Pearson statistic and degrees of freedom after pooling all cells whose
/// expected count is below `min_expected` into a single cell.
pub fn pooled_chi_squared(observed: &[f64], expected: &[f64], min_expected: f64) -> (f64, usize) {
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        if *e < min_expected {
            pool_o += o;
            pool_e += e;
        } else {
            stat += (o - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    (stat, cells - 1)
}

/// Counts set partitions of `{0..n}` by their multiset of block sizes,
/// enumerating restricted growth strings.
pub fn set_partitions_by_block_sizes(n: usize) -> BTreeMap<Vec<u32>, u64> {
    let mut counts = BTreeMap::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0u32; blocks];
        for &b in &rgs {
            sizes[b] += 1;
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        *counts.entry(sizes).or_insert(0) += 1;

        // Next restricted growth string: rgs[i] <= 1 + max(rgs[..i]).
        let mut i = n;
        loop {
            if i <= 1 {
                return counts;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// Bell numbers `B(0..=n)` from the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        bells.push(next[0]);
        row = next;
    }
    bells.truncate(n + 1);
    bells
}

/// `x (x - 1) ... (x - k + 1)`.
pub fn falling(x: f64, k: u32) -> f64 {
    (0..k).map(|j| x - j as f64).product()
}

/// `(-1)^|O| d^|O| S / dx_O` by central differences with one Richardson step.
pub fn fd_mixed_partial(p: &ModelParams, x: &[f64], observed: &[usize], rel_step: f64) -> f64 {
    let stencil = |h: &[f64]| {
        let m = observed.len();
        let mut total = 0.0;
        for mask in 0..(1u32 << m) {
            let mut y = x.to_vec();
            let mut sign = 1.0;
            for (bit, &i) in observed.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    y[i] += h[bit];
                } else {
                    y[i] -= h[bit];
                    sign = -sign;
                }
            }
            total += sign * survival_direct(p, &y);
        }
        let denom: f64 = h.iter().map(|v| 2.0 * v).product();
        let parity = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        parity * total / denom
    };
    let h: Vec<f64> = observed.iter().map(|&i| rel_step * x[i]).collect();
    let half: Vec<f64> = h.iter().map(|v| 0.5 * v).collect();
    let coarse = stencil(&h);
    let fine = stencil(&half);
    (4.0 * fine - coarse) / 3.0
}
