//! Straight-line reference implementations shared by the integration tests.
//! Nothing here calls into the library's numeric code.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

pub fn random_walk(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut level = r.sample::<f64, _>(StandardNormal) * 3.0;
    (0..n)
        .map(|_| {
            level += r.sample::<f64, _>(StandardNormal);
            level
        })
        .collect()
}

pub fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in x {
        s += v;
    }
    s / x.len() as f64
}

pub fn acf_at(r: &[f64], tau: usize) -> f64 {
    let m = mean(r);
    let mut num = 0.0;
    for t in 0..r.len() - tau {
        num += (r[t] - m) * (r[t + tau] - m);
    }
    let mut den = 0.0;
    for v in r {
        den += (v - m) * (v - m);
    }
    num / den
}

pub fn acf(r: &[f64], tau_max: usize) -> Vec<f64> {
    (1..=tau_max).map(|tau| acf_at(r, tau)).collect()
}

pub fn volatility(r: &[f64]) -> f64 {
    let m = mean(r);
    let mut ss = 0.0;
    for v in r {
        ss += (v - m) * (v - m);
    }
    (ss / (r.len() - 1) as f64).sqrt()
}

/// Affine map onto [1, 2] followed by log returns.
pub fn rescaled_log_returns(y: &[f64]) -> Vec<f64> {
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z: Vec<f64> = y.iter().map(|v| 1.0 + (v - lo) / (hi - lo)).collect();
    (1..z.len()).map(|t| z[t].ln() - z[t - 1].ln()).collect()
}

/// |DFT| of the two-sided ACF of `y`, lags -(T-2)..=(T-2) in natural order,
/// by direct summation.
pub fn psd_direct(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let maxlag = n - 2;
    let seq: Vec<f64> = (0..=2 * maxlag)
        .map(|i| {
            let lag = i as isize - maxlag as isize;
            acf_at(y, lag.unsigned_abs())
        })
        .collect();
    let l = seq.len();
    (0..l)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in seq.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((k * j) % l) as f64 / l as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

pub fn mean_psd(y: &[f64]) -> f64 {
    mean(&psd_direct(y))
}

/// Centered moving average, window shrinking symmetrically at the edges.
pub fn trend(y: &[f64], window: usize) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|t| {
            let half = (window / 2).min(t).min(n - 1 - t);
            mean(&y[t - half..=t + half])
        })
        .collect()
}

pub fn content_loss(y: &[f64], content: &[f64], window: usize) -> f64 {
    let h = trend(content, window);
    let mut s = 0.0;
    for t in 0..y.len() {
        s += (y[t] - h[t]).powi(2);
    }
    s
}

pub fn tv_loss(y: &[f64]) -> f64 {
    let mut s = 0.0;
    for t in 1..y.len() {
        s += (y[t] - y[t - 1]).powi(2);
    }
    s
}

/// Style distance with log returns after rescaling.
pub fn style_loss(y: &[f64], style: &[f64], tau_max: usize) -> f64 {
    let (ry, rs) = (rescaled_log_returns(y), rescaled_log_returns(style));
    let (ay, as_) = (acf(&ry, tau_max), acf(&rs, tau_max));
    let mut acf_term = 0.0;
    for i in 0..tau_max {
        acf_term += (ay[i] - as_[i]).powi(2);
    }
    acf_term / tau_max as f64
        + (volatility(&ry) - volatility(&rs)).powi(2)
        + (mean_psd(y) - mean_psd(style)).powi(2)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).powi(2);
    }
    s.sqrt()
}

/// Exhaustive k-NN coverage precision and recall.
pub fn precision_recall(real: &[Vec<f64>], synth: &[Vec<f64>], k: usize) -> (f64, f64) {
    let radius = |set: &[Vec<f64>], i: usize| {
        let mut d = Vec::new();
        for (j, p) in set.iter().enumerate() {
            if j != i {
                d.push(dist(&set[i], p));
            }
        }
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d[k - 1]
    };
    let cover = |queries: &[Vec<f64>], centers: &[Vec<f64>]| {
        let radii: Vec<f64> = (0..centers.len()).map(|i| radius(centers, i)).collect();
        let mut hits = 0;
        for q in queries {
            let mut hit = false;
            for (c, r) in centers.iter().zip(&radii) {
                if dist(q, c) <= *r {
                    hit = true;
                }
            }
            if hit {
                hits += 1;
            }
        }
        hits as f64 / queries.len() as f64
    };
    (cover(synth, real), cover(real, synth))
}

pub fn authenticity(real: &[Vec<f64>], synth: &[Vec<f64>]) -> f64 {
    let mut authentic = 0;
    for s in synth {
        let mut best = 0;
        for j in 1..real.len() {
            if dist(s, &real[j]) < dist(s, &real[best]) {
                best = j;
            }
        }
        let mut gap = f64::INFINITY;
        for j in 0..real.len() {
            if j != best {
                gap = gap.min(dist(&real[best], &real[j]));
            }
        }
        if dist(s, &real[best]) >= gap {
            authentic += 1;
        }
    }
    authentic as f64 / synth.len() as f64
}
