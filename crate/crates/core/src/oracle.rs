//! Derivative-free one-dimensional tools used to cross-check closed forms.
//!
//! Nothing in here knows about the engine model: every routine takes a
//! black-box `Fn(f64) -> f64`.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const PHI: f64 = 1.618_033_988_749_895;
const POST_HOC_SAMPLES: usize = 1000;

/// Interval with the function values at its ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain("bracket", "finite with lo < hi", hi - lo));
        }
        Ok(Self {
            lo,
            hi,
            f_lo: f(lo),
            f_hi: f(hi),
        })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn has_sign_change(&self) -> bool {
        self.f_lo * self.f_hi <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenOutcome {
    pub argmax: f64,
    pub max: f64,
    pub iterations: usize,
}

/// Upper bound on golden-section iterations needed to shrink `width` below `tol`.
pub fn golden_iteration_bound(width: f64, tol: f64) -> usize {
    ((width / tol).ln() / PHI.ln()).ceil().max(0.0) as usize + 2
}

/// Maximizer of a unimodal `f` on the bracket, to within `tol`.
pub fn golden_argmax<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    golden_search(f, bracket, tol).map(|o| o.argmax)
}

/// Golden-section search followed by a dense post-hoc scan that rejects
/// brackets on which `f` is visibly multimodal.
pub fn golden_search<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<GoldenOutcome> {
    if !(bracket.lo < bracket.hi) {
        return Err(Error::domain("bracket width", "positive", bracket.width()));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance", "positive", tol));
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let max_iter = golden_iteration_bound(b - a, tol);
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    // the interior probes and the ends may beat the midpoint
    let (argmax, max) = [
        (mid, f(mid)),
        (c, fc),
        (d, fd),
        (bracket.lo, bracket.f_lo),
        (bracket.hi, bracket.f_hi),
    ]
    .into_iter()
    .fold(
        (mid, f64::NEG_INFINITY),
        |best, cand| if cand.1 > best.1 { cand } else { best },
    );

    check_unimodal(&f, bracket, argmax, max)?;
    Ok(GoldenOutcome {
        argmax,
        max,
        iterations,
    })
}

fn check_unimodal<F: Fn(f64) -> f64>(f: &F, bracket: Bracket, argmax: f64, max: f64) -> Result<()> {
    let spacing = bracket.width() / (POST_HOC_SAMPLES - 1) as f64;
    let slack = 1e-12 * max.abs();
    let samples: Vec<(f64, f64)> = (0..POST_HOC_SAMPLES)
        .map(|i| {
            let x = bracket.lo + i as f64 * spacing;
            (x, f(x))
        })
        .collect();

    // a sample beating the optimum is only tolerated inside one grid cell of it
    for &(x, y) in &samples {
        if y > max + slack && (x - argmax).abs() > spacing {
            return Err(Error::NotUnimodal { at: x });
        }
    }
    // rise, then fall: once the samples have dropped they may not climb again
    let mut falling = false;
    for w in samples.windows(2) {
        let (y0, y1) = (w[0].1, w[1].1);
        let tol = 1e-12 * y0.abs().max(y1.abs());
        if y1 < y0 - tol {
            falling = true;
        } else if falling && y1 > y0 + tol {
            return Err(Error::NotUnimodal { at: w[1].0 });
        }
    }
    Ok(())
}

/// Root of `f` inside a sign-changing bracket, by bisection down to width `tol`.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance", "positive", tol));
    }
    if bracket.f_lo == 0.0 {
        return Ok(bracket.lo);
    }
    if bracket.f_hi == 0.0 {
        return Ok(bracket.hi);
    }
    if !bracket.has_sign_change() || bracket.f_lo.is_nan() || bracket.f_hi.is_nan() {
        return Err(Error::NoSignChange {
            lo: bracket.lo,
            hi: bracket.hi,
            f_lo: bracket.f_lo,
            f_hi: bracket.f_hi,
        });
    }
    let (mut lo, mut hi, mut f_lo) = (bracket.lo, bracket.hi, bracket.f_lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(f(x + h) - f(x - h)) / 2h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// One Richardson step on the central difference, `O(h^4)` accurate.
pub fn richardson_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let coarse = central_diff(&f, x, h);
    let fine = central_diff(&f, x, 0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Brackets the largest value of `f` sampled on a log-spaced grid over
/// `[lo, hi]` (both positive) by its two grid neighbours.
///
/// Fails when the best sample sits on an end of the grid, since the
/// maximum may then lie outside the scanned range.
pub fn log_scan_bracket<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Result<Bracket> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain("scan range", "0 < lo < hi", lo));
    }
    let points = points.max(3);
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| lo * (ratio * i as f64).exp()).collect();
    let (best, _) = xs.iter().map(|&x| f(x)).enumerate().filter(|(_, y)| !y.is_nan()).fold(
        (usize::MAX, f64::NEG_INFINITY),
        |acc, (i, y)| if y > acc.1 { (i, y) } else { acc },
    );
    if best == usize::MAX || best == 0 || best == points - 1 {
        let at = if best == usize::MAX { f64::NAN } else { xs[best] };
        return Err(Error::NoInteriorOptimum { t: at });
    }
    Bracket::new(f, xs[best - 1], xs[best + 1])
}
