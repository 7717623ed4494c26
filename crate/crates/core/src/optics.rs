//! Transverse pump fields: sampling grids, pump synthesis, paraxial
//! propagation and `y`-parity analysis.
//!
//! Grids are cell-centered: sample `i` of an `n`-point axis sits at
//! `center + (i − (n−1)/2)·d`. A grid centered on zero is therefore mirror
//! symmetric, and `y → −y` maps sample `j` onto sample `n−1−j` without
//! landing a sample on the mirror line.

use std::io::Write;

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Argon-ion UV line used as pump.
pub const DEFAULT_PUMP_WAVELENGTH: f64 = 351e-9;
/// Laminate-to-detection distance of the reference bench.
pub const DEFAULT_PROPAGATION_DISTANCE: f64 = 3.0;
pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_WINDOW: f64 = 20e-3;

/// Minimum window extent in units of the beam waist.
pub const MIN_WINDOW_WAISTS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub nx: usize,
    pub ny: usize,
    /// Physical extent along x (m).
    pub width: f64,
    /// Physical extent along y (m).
    pub height: f64,
    pub center_x: f64,
    pub center_y: f64,
}

impl GridGeometry {
    pub fn new(nx: usize, ny: usize, width: f64, height: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis, got {nx}x{ny}"
            )));
        }
        if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "window extents must be positive, got {width} x {height}"
            )));
        }
        Ok(GridGeometry {
            nx,
            ny,
            width,
            height,
            center_x: 0.0,
            center_y: 0.0,
        })
    }

    pub fn square(samples: usize, window: f64) -> Result<Self> {
        Self::new(samples, samples, window, window)
    }

    pub fn with_center(mut self, center_x: f64, center_y: f64) -> Self {
        self.center_x = center_x;
        self.center_y = center_y;
        self
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.width / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.height / self.ny as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.center_x + (i as f64 - 0.5 * (self.nx - 1) as f64) * self.dx()
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.center_y + (j as f64 - 0.5 * (self.ny - 1) as f64) * self.dy()
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn is_y_symmetric(&self) -> bool {
        self.center_y.abs() <= 1e-12 * self.height
    }
}

/// Complex scalar field on a transverse grid at plane `plane_z`.
///
/// `samples[[i, j]]` holds the field at `(x(i), y(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    geometry: GridGeometry,
    samples: Array2<Complex64>,
    plane_z: f64,
    wavelength: f64,
}

impl FieldGrid {
    pub fn new(
        geometry: GridGeometry,
        samples: Array2<Complex64>,
        plane_z: f64,
        wavelength: f64,
    ) -> Result<Self> {
        if samples.dim() != (geometry.nx, geometry.ny) {
            return Err(Error::InvalidGrid(format!(
                "sample array is {:?}, geometry is {}x{}",
                samples.dim(),
                geometry.nx,
                geometry.ny
            )));
        }
        if !(wavelength > 0.0) {
            return Err(Error::param("wavelength", "must be positive"));
        }
        let field = FieldGrid {
            geometry,
            samples,
            plane_z,
            wavelength,
        };
        let power = field.power();
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "total power must be finite and positive, got {power}"
            )));
        }
        Ok(field)
    }

    /// Samples `f(x, y)` at every grid point.
    pub fn from_fn(
        geometry: GridGeometry,
        plane_z: f64,
        wavelength: f64,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let samples = Array2::from_shape_fn((geometry.nx, geometry.ny), |(i, j)| {
            f(geometry.x(i), geometry.y(j))
        });
        Self::new(geometry, samples, plane_z, wavelength)
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn samples(&self) -> &Array2<Complex64> {
        &self.samples
    }

    pub fn plane_z(&self) -> f64 {
        self.plane_z
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// `Σ |W|² dx dy`, summed in index order.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.geometry.cell_area()
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation between sample centers; zero outside them.
    #[inline]
    pub fn interpolate(&self, x: f64, y: f64) -> Complex64 {
        let g = &self.geometry;
        let fx = (x - g.x(0)) / g.dx();
        let fy = (y - g.y(0)) / g.dy();
        let (maxx, maxy) = ((g.nx - 1) as f64, (g.ny - 1) as f64);
        if !(fx >= 0.0 && fx <= maxx && fy >= 0.0 && fy <= maxy) {
            return Complex64::new(0.0, 0.0);
        }
        let i = (fx.floor() as usize).min(g.nx - 2);
        let j = (fy.floor() as usize).min(g.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let s = &self.samples;
        let a = s[[i, j]] * (1.0 - ty) + s[[i, j + 1]] * ty;
        let b = s[[i + 1, j]] * (1.0 - ty) + s[[i + 1, j + 1]] * ty;
        a * (1.0 - tx) + b * tx
    }

    /// Plain-text dump: header `x,y,re,im`, then one row per sample with `x`
    /// as the slow index.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,re,im")?;
        let g = &self.geometry;
        for i in 0..g.nx {
            for j in 0..g.ny {
                let s = self.samples[[i, j]];
                writeln!(out, "{},{},{},{}", g.x(i), g.y(j), s.re, s.im)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpKind {
    Gaussian {
        waist: f64,
    },
    /// `HG_mn`: order `m` along x, `n` along y.
    HermiteGauss {
        m: u32,
        n: u32,
        waist: f64,
    },
    /// Gaussian with the `y < 0` half multiplied by
    /// `transmission · e^{i·step_phase}` (thin laminate mask).
    PhaseStep {
        waist: f64,
        step_phase: f64,
        transmission: f64,
    },
}

impl PumpKind {
    pub fn waist(&self) -> f64 {
        match *self {
            PumpKind::Gaussian { waist }
            | PumpKind::HermiteGauss { waist, .. }
            | PumpKind::PhaseStep { waist, .. } => waist,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpec {
    pub kind: PumpKind,
    pub wavelength: f64,
}

impl PumpSpec {
    pub fn new(kind: PumpKind) -> Self {
        PumpSpec {
            kind,
            wavelength: DEFAULT_PUMP_WAVELENGTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let waist = self.kind.waist();
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::param(
                "waist",
                format!("must be positive, got {waist}"),
            ));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::param("wavelength", "must be positive"));
        }
        if let PumpKind::PhaseStep {
            step_phase,
            transmission,
            ..
        } = self.kind
        {
            if !step_phase.is_finite() {
                return Err(Error::param("step_phase", "must be finite"));
            }
            if !(transmission > 0.0 && transmission <= 1.0) {
                return Err(Error::param(
                    "transmission",
                    format!("must lie in (0, 1], got {transmission}"),
                ));
            }
        }
        Ok(())
    }
}

/// Physicists' Hermite polynomial `H_n(t)`.
pub fn hermite(n: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * t * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Unit-power `HG_mn` amplitude at the waist plane.
pub fn hermite_gauss(m: u32, n: u32, waist: f64, x: f64, y: f64) -> f64 {
    let norm = (0.5
        * waist
        * waist
        * std::f64::consts::PI
        * 2f64.powi((m + n) as i32)
        * factorial(m)
        * factorial(n))
    .sqrt();
    let s = std::f64::consts::SQRT_2 / waist;
    hermite(m, s * x) * hermite(n, s * y) * (-(x * x + y * y) / (waist * waist)).exp() / norm
}

/// Builds the pump at the laminate plane (`z = 0`).
///
/// Gaussian and Hermite-Gauss profiles are normalized to unit power; the
/// phase-step mask is applied to a unit-power Gaussian, so a transmission
/// below one removes power.
pub fn synthesize_pump(spec: &PumpSpec, geometry: GridGeometry) -> Result<FieldGrid> {
    spec.validate()?;
    let waist = spec.kind.waist();
    let window = geometry.width.min(geometry.height);
    let required = MIN_WINDOW_WAISTS * waist;
    if window < required {
        return Err(Error::WindowTooSmall { window, required });
    }
    let kind = spec.kind;
    FieldGrid::from_fn(geometry, 0.0, spec.wavelength, |x, y| match kind {
        PumpKind::Gaussian { waist } => Complex64::new(hermite_gauss(0, 0, waist, x, y), 0.0),
        PumpKind::HermiteGauss { m, n, waist } => {
            Complex64::new(hermite_gauss(m, n, waist, x, y), 0.0)
        }
        PumpKind::PhaseStep {
            waist,
            step_phase,
            transmission,
        } => {
            let g = Complex64::new(hermite_gauss(0, 0, waist, x, y), 0.0);
            if y < 0.0 {
                g * Complex64::from_polar(transmission, step_phase)
            } else {
                g
            }
        }
    })
}

/// Largest distance the transfer-function propagator can cover on this grid
/// without aliasing the quadratic phase: `min(N·d²)/λ` over both axes.
pub fn max_propagation_distance(geometry: &GridGeometry, wavelength: f64) -> f64 {
    let lx = geometry.nx as f64 * geometry.dx() * geometry.dx();
    let ly = geometry.ny as f64 * geometry.dy() * geometry.dy();
    lx.min(ly) / wavelength
}

fn frequency(k: usize, n: usize, d: f64) -> f64 {
    let signed = if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    };
    signed / (n as f64 * d)
}

/// Paraxial free-space propagation by the angular-spectrum transfer
/// function `exp(−iπλd(fx² + fy²))`.
///
/// The constant carrier phase `e^{ikd}` is dropped. The transfer function
/// has unit modulus and is even in both frequencies, so power and parity
/// survive to rounding.
pub fn fresnel_propagate(field: &FieldGrid, distance: f64) -> Result<FieldGrid> {
    if !(distance >= 0.0 && distance.is_finite()) {
        return Err(Error::param(
            "distance",
            format!("must be finite and non-negative, got {distance}"),
        ));
    }
    let g = *field.geometry();
    let limit = max_propagation_distance(&g, field.wavelength);
    if distance > limit {
        return Err(Error::Sampling { distance, limit });
    }
    let (nx, ny) = (g.nx, g.ny);
    let mut planner = FftPlanner::<f64>::new();
    let fwd_y = planner.plan_fft_forward(ny);
    let inv_y = planner.plan_fft_inverse(ny);
    let fwd_x = planner.plan_fft_forward(nx);
    let inv_x = planner.plan_fft_inverse(nx);

    let mut data = field.samples.as_standard_layout().into_owned();
    let mut column = vec![Complex64::new(0.0, 0.0); nx];

    let transform = |data: &mut Array2<Complex64>,
                     column: &mut Vec<Complex64>,
                     along_y: &dyn rustfft::Fft<f64>,
                     along_x: &dyn rustfft::Fft<f64>| {
        for mut row in data.rows_mut() {
            along_y.process(row.as_slice_mut().expect("standard layout"));
        }
        for j in 0..ny {
            for i in 0..nx {
                column[i] = data[[i, j]];
            }
            along_x.process(column);
            for i in 0..nx {
                data[[i, j]] = column[i];
            }
        }
    };

    transform(&mut data, &mut column, fwd_y.as_ref(), fwd_x.as_ref());

    let scale = 1.0 / (nx * ny) as f64;
    let coeff = -std::f64::consts::PI * field.wavelength * distance;
    let fx: Vec<f64> = (0..nx).map(|k| frequency(k, nx, g.dx())).collect();
    let fy: Vec<f64> = (0..ny).map(|k| frequency(k, ny, g.dy())).collect();
    Zip::indexed(&mut data).for_each(|(i, j), v| {
        let phase = coeff * (fx[i] * fx[i] + fy[j] * fy[j]);
        *v *= Complex64::from_polar(scale, phase);
    });

    transform(&mut data, &mut column, inv_y.as_ref(), inv_x.as_ref());

    FieldGrid::new(g, data, field.plane_z + distance, field.wavelength)
}

/// Even and odd parts `½[W(x, y) ± W(x, −y)]`.
pub fn parity_parts(field: &FieldGrid) -> Result<(FieldGrid, FieldGrid)> {
    let g = field.geometry;
    if !g.is_y_symmetric() {
        return Err(Error::AsymmetricGrid { offset: g.center_y });
    }
    let s = &field.samples;
    let ny = g.ny;
    let even = Array2::from_shape_fn((g.nx, ny), |(i, j)| (s[[i, j]] + s[[i, ny - 1 - j]]) * 0.5);
    let odd = Array2::from_shape_fn((g.nx, ny), |(i, j)| (s[[i, j]] - s[[i, ny - 1 - j]]) * 0.5);
    // Either part may legitimately be zero, so skip the power check.
    let make = |samples| FieldGrid {
        geometry: g,
        samples,
        plane_z: field.plane_z,
        wavelength: field.wavelength,
    };
    Ok((make(even), make(odd)))
}

/// Fractions of power in the `y`-even and `y`-odd parts. They sum to one
/// because the two parts are orthogonal on a mirror-symmetric grid.
pub fn parity_decompose(field: &FieldGrid) -> Result<(f64, f64)> {
    let (even, odd) = parity_parts(field)?;
    let (pe, po) = (even.power(), odd.power());
    let total = pe + po;
    Ok((pe / total, po / total))
}
