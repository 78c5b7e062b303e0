//! Globally adaptive Gauss-Kronrod (10/21) integration of vector-valued
//! integrands, with nesting support.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances and limits for every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Probability mass left beyond the truncation point of each infinite axis.
    pub tail_quantile: f64,
    /// Maximum number of subintervals per one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-8,
            absolute_tolerance: 1e-10,
            tail_quantile: 1e-10,
            max_subdivisions: 500,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("relative_tolerance", self.relative_tolerance),
            ("absolute_tolerance", self.absolute_tolerance),
            ("tail_quantile", self.tail_quantile),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(name, v, "a finite value > 0"));
            }
        }
        if self.tail_quantile >= 1.0 {
            return Err(Error::domain("tail_quantile", self.tail_quantile, "a value < 1"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions", 0.0, "a value >= 1"));
        }
        Ok(())
    }

    /// Spec for integrals nested inside an outer integral.
    pub(crate) fn inner(&self) -> Self {
        Self {
            relative_tolerance: self.relative_tolerance * 0.1,
            absolute_tolerance: self.absolute_tolerance * 0.1,
            ..*self
        }
    }
}

/// An integral value with a conservative absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
}

impl<const N: usize> Estimate<N> {
    pub const ZERO: Self = Self {
        value: [0.0; N],
        error: 0.0,
    };

    pub fn exact(value: [f64; N]) -> Self {
        Self { value, error: 0.0 }
    }

    pub fn scale(mut self, k: f64) -> Self {
        for v in &mut self.value {
            *v *= k;
        }
        self.error *= k.abs();
        self
    }

    fn magnitude(&self) -> f64 {
        self.value.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl<const N: usize> std::ops::Add for Estimate<N> {
    type Output = Self;

    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.value.iter_mut().zip(other.value) {
            *a += b;
        }
        self.error += other.error;
        self
    }
}

impl<const N: usize> From<[f64; N]> for Estimate<N> {
    fn from(value: [f64; N]) -> Self {
        Self::exact(value)
    }
}

struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: f64,
    nested_error: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn gauss_kronrod<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel<N>>
where
    F: FnMut(f64) -> Result<Estimate<N>>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut fv = [[0.0; N]; 21];
    let mut nested = 0.0;
    let mid = f(center)?;
    fv[20] = mid.value;
    nested += WGK[10] * mid.error;
    for j in 0..10 {
        let dx = half * XGK[j];
        let a = f(center - dx)?;
        let b = f(center + dx)?;
        fv[2 * j] = a.value;
        fv[2 * j + 1] = b.value;
        nested += WGK[j] * (a.error + b.error);
    }

    let mut value = [0.0; N];
    let mut error = 0.0_f64;
    for k in 0..N {
        let fc = fv[20][k];
        let mut kronrod = WGK[10] * fc;
        let mut gauss = 0.0;
        let mut resabs = WGK[10] * fc.abs();
        for j in 0..10 {
            let (a, b) = (fv[2 * j][k], fv[2 * j + 1][k]);
            kronrod += WGK[j] * (a + b);
            resabs += WGK[j] * (a.abs() + b.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (a + b);
            }
        }
        let mean = 0.5 * kronrod;
        let mut resasc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((fv[2 * j][k] - mean).abs() + (fv[2 * j + 1][k] - mean).abs());
        }
        let e = rescale_error((kronrod - gauss) * half, resabs * half.abs(), resasc * half.abs());
        value[k] = kronrod * half;
        error = error.max(e);
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error,
        nested_error: nested * half.abs(),
    })
}

/// Integrates a vector-valued `f` over `[lo, hi]`, splitting first at the
/// given interior breakpoints (kinks or jumps of the integrand).
///
/// An empty or reversed interval integrates to exactly zero. Errors reported
/// by `f` (from nested integrals) are folded into the returned bound but do
/// not drive subdivision.
pub fn integrate<const N: usize, F>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<Estimate<N>>,
{
    // also rejects NaN bounds
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Ok(Estimate::ZERO);
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(lo);
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut panels = Vec::with_capacity(cuts.len() + 16);
    for w in cuts.windows(2) {
        panels.push(gauss_kronrod(&mut f, w[0], w[1])?);
    }

    loop {
        let mut total = Estimate::<N>::ZERO;
        let mut gk_error = 0.0;
        for p in &panels {
            for (t, v) in total.value.iter_mut().zip(p.value) {
                *t += v;
            }
            gk_error += p.error;
            total.error += p.nested_error;
        }
        let tol = spec.absolute_tolerance.max(spec.relative_tolerance * total.magnitude());
        if gk_error <= tol {
            total.error += gk_error;
            return Ok(total);
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(Error::Convergence {
                subdivisions: panels.len(),
                error_estimate: gk_error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            return Err(Error::Convergence {
                subdivisions: panels.len() + 1,
                error_estimate: gk_error,
            });
        }
        panels.push(gauss_kronrod(&mut f, p.lo, mid)?);
        panels.push(gauss_kronrod(&mut f, mid, p.hi)?);
    }
}

/// Bounds of one axis of a nested integral, as a function of the outer
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    /// May be `f64::INFINITY`; the axis is then mapped onto `[0, 1)`.
    pub hi: f64,
    pub breakpoints: Vec<f64>,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(breakpoints);
        self
    }
}

/// Axis bounds callback: receives the already-fixed outer coordinates.
pub type AxisFn<'a> = Box<dyn Fn(&[f64]) -> AxisRange + 'a>;

/// Integrates a scalar function of a `k`-dimensional point over an iterated
/// region. `axes[0]` is outermost; each axis's bounds may depend on the
/// coordinates of the axes outside it. A degenerate range (`lo >= hi`)
/// contributes exactly zero.
pub fn nested_quadrature(
    integrand: &dyn Fn(&[f64]) -> f64,
    axes: &[AxisFn<'_>],
    spec: &QuadratureSpec,
) -> Result<Estimate<1>> {
    spec.validate()?;
    let mut point = Vec::with_capacity(axes.len());
    nested_level(integrand, axes, &mut point, spec)
}

fn nested_level(
    integrand: &dyn Fn(&[f64]) -> f64,
    axes: &[AxisFn<'_>],
    point: &mut Vec<f64>,
    spec: &QuadratureSpec,
) -> Result<Estimate<1>> {
    let depth = point.len();
    if depth == axes.len() {
        return Ok(Estimate::exact([integrand(point)]));
    }
    let range = axes[depth](point);
    let inner = spec.inner();
    let mut eval = |x: f64| -> Result<Estimate<1>> {
        point.truncate(depth);
        point.push(x);
        let r = nested_level(integrand, axes, point, &inner);
        point.truncate(depth);
        r
    };
    if range.hi.is_infinite() {
        // x = lo + u / (1 - u)
        let lo = range.lo;
        let bps: Vec<f64> = range
            .breakpoints
            .iter()
            .filter(|&&b| b > lo)
            .map(|&b| (b - lo) / (1.0 + b - lo))
            .collect();
        integrate(
            |u| {
                if u >= 1.0 {
                    return Ok(Estimate::ZERO);
                }
                let jac = 1.0 / ((1.0 - u) * (1.0 - u));
                Ok(eval(lo + u / (1.0 - u))?.scale(jac))
            },
            0.0,
            1.0,
            &bps,
            spec,
        )
    } else {
        integrate(eval, range.lo, range.hi, &range.breakpoints, spec)
    }
}
