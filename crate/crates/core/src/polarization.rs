//! Two-photon polarization algebra.
//!
//! States live in the four-dimensional space spanned by the product basis
//! `(HH, HV, VH, VV)`, first letter photon 1. Global phases are physically
//! irrelevant, so states are compared through [`TwoPhotonPolState::fidelity`]
//! rather than component by component.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used when checking unitarity and normalization on construction.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// A single-photon Jones vector `(H, V)`.
pub type Jones = [Complex64; 2];

/// Single-photon analysis directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolBasis {
    H,
    V,
    /// `(H + V)/√2`
    Plus,
    /// `(H − V)/√2`
    Minus,
}

impl PolBasis {
    pub fn jones(self) -> Jones {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            PolBasis::H => [ONE, ZERO],
            PolBasis::V => [ZERO, ONE],
            PolBasis::Plus => [s, s],
            PolBasis::Minus => [s, -s],
        }
    }

    /// The orthogonal partner within the same analysis basis.
    pub fn orthogonal(self) -> Self {
        match self {
            PolBasis::H => PolBasis::V,
            PolBasis::V => PolBasis::H,
            PolBasis::Plus => PolBasis::Minus,
            PolBasis::Minus => PolBasis::Plus,
        }
    }
}

/// Linear polarization at `angle` radians from H.
pub fn linear(angle: f64) -> Jones {
    [
        Complex64::new(angle.cos(), 0.0),
        Complex64::new(angle.sin(), 0.0),
    ]
}

/// Unnormalized two-photon polarization amplitudes over `(HH, HV, VH, VV)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolVector(pub [Complex64; 4]);

impl PolVector {
    pub const ZERO: PolVector = PolVector([ZERO; 4]);

    pub fn product(a: Jones, b: Jones) -> Self {
        PolVector([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    #[inline]
    pub fn component(&self, photon1: usize, photon2: usize) -> Complex64 {
        self.0[2 * photon1 + photon2]
    }

    /// Exchanges the two photons: `HV ↔ VH`.
    #[inline]
    pub fn swapped(&self) -> Self {
        let [hh, hv, vh, vv] = self.0;
        PolVector([hh, vh, hv, vv])
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    #[inline]
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PolVector(self.0.map(|a| a * c))
    }

    /// Amplitude `⟨a ⊗ b|self⟩`.
    pub fn project(&self, a: &Jones, b: &Jones) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += (a[i] * b[j]).conj() * self.component(i, j);
            }
        }
        acc
    }

    /// Contracts photon 1 with `a`, leaving photon 2's amplitudes `(H, V)`.
    pub fn project_first(&self, a: &Jones) -> Jones {
        [
            a[0].conj() * self.0[0] + a[1].conj() * self.0[2],
            a[0].conj() * self.0[1] + a[1].conj() * self.0[3],
        ]
    }

    /// Contracts photon 2 with `b`, leaving photon 1's amplitudes `(H, V)`.
    pub fn project_second(&self, b: &Jones) -> Jones {
        [
            b[0].conj() * self.0[0] + b[1].conj() * self.0[1],
            b[0].conj() * self.0[2] + b[1].conj() * self.0[3],
        ]
    }
}

impl Add for PolVector {
    type Output = PolVector;
    fn add(self, rhs: Self) -> Self {
        PolVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for PolVector {
    type Output = PolVector;
    fn sub(self, rhs: Self) -> Self {
        PolVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<Complex64> for PolVector {
    type Output = PolVector;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for PolVector {
    type Output = PolVector;
    fn mul(self, rhs: f64) -> Self {
        PolVector(self.0.map(|a| a * rhs))
    }
}

/// A normalized two-photon polarization state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonPolState(PolVector);

impl TwoPhotonPolState {
    /// Normalizes `amps`; fails only for the zero vector.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        Self::normalize(PolVector(amps))
    }

    pub fn normalize(v: PolVector) -> Result<Self> {
        let n = v.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(TwoPhotonPolState(v * (1.0 / n)))
    }

    pub fn product(a: Jones, b: Jones) -> Result<Self> {
        Self::normalize(PolVector::product(a, b))
    }

    pub fn vector(&self) -> &PolVector {
        &self.0
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.0 .0
    }

    pub fn swapped(&self) -> Self {
        TwoPhotonPolState(self.0.swapped())
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.0.inner(&other.0).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];

    pub fn is_symmetric(self) -> bool {
        self != BellKind::PsiMinus
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "psi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PhiPlus => "phi_plus",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("expected one of psi_minus, psi_plus, phi_minus, phi_plus, got `{s}`")
            })
    }
}

pub fn bell_state(kind: BellKind) -> TwoPhotonPolState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let amps = match kind {
        BellKind::PsiMinus => [ZERO, s, -s, ZERO],
        BellKind::PsiPlus => [ZERO, s, s, ZERO],
        BellKind::PhiMinus => [s, ZERO, ZERO, -s],
        BellKind::PhiPlus => [s, ZERO, ZERO, s],
    };
    TwoPhotonPolState(PolVector(amps))
}

/// A validated single-photon unitary acting on `(H, V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    m: [[Complex64; 2]; 2],
}

impl LocalUnitary {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let deviation = unitarity_deviation(&m);
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(LocalUnitary { m })
    }

    pub fn identity() -> Self {
        LocalUnitary {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// Draws a Haar-distributed element of U(2).
    ///
    /// `(a, b)` is uniform on the unit 3-sphere, which makes
    /// `[[a, -b*], [b, a*]]` Haar on SU(2); a uniform global phase extends it
    /// to U(2).
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let a = Complex64::new(g[0] / n, g[1] / n);
        let b = Complex64::new(g[2] / n, g[3] / n);
        let phase = Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
        LocalUnitary {
            m: [
                [phase * a, -phase * b.conj()],
                [phase * b, phase * a.conj()],
            ],
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn apply(&self, v: &Jones) -> Jones {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        LocalUnitary {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    /// `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Self) -> Self {
        let (a, b) = (self.m, other.m);
        LocalUnitary {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
            }),
        }
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }
}

fn unitarity_deviation(m: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ZERO;
            for k in 0..2 {
                acc += m[k][i].conj() * m[k][j];
            }
            let target = if i == j { ONE } else { ZERO };
            let d = (acc - target).norm();
            worst = if d.is_nan() {
                f64::INFINITY
            } else {
                worst.max(d)
            };
        }
    }
    worst
}

/// `(U1 ⊗ U2)|s⟩` on an arbitrary amplitude vector.
pub fn apply_local(u1: &LocalUnitary, u2: &LocalUnitary, s: &PolVector) -> PolVector {
    let (a, b) = (u1.m, u2.m);
    let mut out = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ZERO;
            for k in 0..2 {
                for l in 0..2 {
                    acc += a[i][k] * b[j][l] * s.component(k, l);
                }
            }
            out[2 * i + j] = acc;
        }
    }
    PolVector(out)
}

/// `(U1 ⊗ U2)|s⟩`. Unitarity of both factors is enforced when they are
/// built, so the result stays normalized.
pub fn apply_two_qubit(
    u1: &LocalUnitary,
    u2: &LocalUnitary,
    s: &TwoPhotonPolState,
) -> TwoPhotonPolState {
    TwoPhotonPolState(apply_local(u1, u2, &s.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavePlate {
    Half,
    Quarter,
}

impl WavePlate {
    pub fn retardance(self) -> f64 {
        match self {
            WavePlate::Half => std::f64::consts::PI,
            WavePlate::Quarter => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Ideal retarder with its fast axis at `fast_axis_angle` radians from H.
///
/// Convention: `R(θ) · diag(1, e^{iΓ}) · R(−θ)`, i.e. the retardance `Γ` is
/// applied to the slow axis and the fast axis carries no phase.
pub fn wave_plate(kind: WavePlate, fast_axis_angle: f64) -> LocalUnitary {
    let (s, c) = fast_axis_angle.sin_cos();
    let slow = Complex64::from_polar(1.0, kind.retardance());
    let c2 = Complex64::new(c * c, 0.0);
    let s2 = Complex64::new(s * s, 0.0);
    let cs = Complex64::new(c * s, 0.0);
    LocalUnitary {
        m: [
            [c2 + s2 * slow, cs * (ONE - slow)],
            [cs * (ONE - slow), s2 + c2 * slow],
        ],
    }
}

/// Splits `s` into its exchange-symmetric and antisymmetric parts.
///
/// The antisymmetric part is always a multiple of ψ⁻.
pub fn exchange_projections(s: &PolVector) -> (PolVector, PolVector) {
    let swapped = s.swapped();
    ((*s + swapped) * 0.5, (*s - swapped) * 0.5)
}

/// `|⟨setting1, setting2|s⟩|²`.
pub fn analyzer_projection(s: &TwoPhotonPolState, setting1: PolBasis, setting2: PolBasis) -> f64 {
    projection_probability(s, &setting1.jones(), &setting2.jones())
}

/// `|⟨a ⊗ b|s⟩|²` for arbitrary single-photon analysis vectors.
pub fn projection_probability(s: &TwoPhotonPolState, a: &Jones, b: &Jones) -> f64 {
    s.0.project(a, b).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_vec_eq(a: &PolVector, b: &PolVector, tol: f64) {
        assert!((*a - *b).max_abs() <= tol, "{a:?} != {b:?}");
    }

    #[test]
    fn bell_states_transcribed() {
        let s = FRAC_1_SQRT_2;
        assert_eq!(
            bell_state(BellKind::PsiMinus).amplitudes(),
            [c(0.0), c(s), c(-s), c(0.0)]
        );
        assert_eq!(
            bell_state(BellKind::PsiPlus).amplitudes(),
            [c(0.0), c(s), c(s), c(0.0)]
        );
        assert_eq!(
            bell_state(BellKind::PhiPlus).amplitudes(),
            [c(s), c(0.0), c(0.0), c(s)]
        );
        for kind in BellKind::ALL {
            let st = bell_state(kind);
            assert_abs_diff_eq!(st.vector().norm_sqr(), 1.0, epsilon = 1e-12);
            let sw = st.swapped();
            let sign = if kind.is_symmetric() { 1.0 } else { -1.0 };
            assert_vec_eq(sw.vector(), &(*st.vector() * sign), 0.0);
        }
    }

    #[test]
    fn bell_states_orthonormal() {
        for a in BellKind::ALL {
            for b in BellKind::ALL {
                let f = bell_state(a).fidelity(&bell_state(b));
                assert_abs_diff_eq!(f, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn identity_leaves_singlet() {
        let psi = bell_state(BellKind::PsiMinus);
        let id = LocalUnitary::identity();
        assert_eq!(apply_two_qubit(&id, &id, &psi), psi);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = [[c(1.0), c(0.1)], [c(0.0), c(1.0)]];
        assert!(matches!(
            LocalUnitary::new(m),
            Err(Error::NonUnitary { .. })
        ));
        let nan = [[c(f64::NAN), c(0.0)], [c(0.0), c(1.0)]];
        assert!(LocalUnitary::new(nan).is_err());
        assert!(LocalUnitary::new(wave_plate(WavePlate::Quarter, 0.3).matrix()).is_ok());
    }

    #[test]
    fn collective_unitary_phase_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let psi = bell_state(BellKind::PsiMinus);
        for _ in 0..20 {
            let u = LocalUnitary::haar_random(&mut rng);
            let out = apply_two_qubit(&u, &u, &psi);
            assert_abs_diff_eq!(out.fidelity(&psi), 1.0, epsilon = 1e-12);
            // (U⊗U)ψ⁻ = det(U) ψ⁻
            let expected = *psi.vector() * u.determinant();
            assert_vec_eq(out.vector(), &expected, 1e-12);
        }
    }

    #[test]
    fn half_wave_plate_at_zero_is_diag() {
        let m = wave_plate(WavePlate::Half, 0.0).matrix();
        assert_abs_diff_eq!((m[0][0] - c(1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((m[1][1] - c(-1.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[0][1].norm() + m[1][0].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn half_wave_plate_at_22_5_makes_plus() {
        let hwp = wave_plate(WavePlate::Half, PI / 8.0);
        let out = hwp.apply(&PolBasis::H.jones());
        let plus = PolBasis::Plus.jones();
        let overlap = plus[0].conj() * out[0] + plus[1].conj() * out[1];
        assert_abs_diff_eq!(overlap.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hwp_rotated_psi_plus_has_no_cross_terms() {
        // Plates at 22.5° in front of H/V polarizing splitters analyze in the
        // ± basis: the H/V outputs after the plates read ⟨+−| and ⟨−+|.
        let hwp = wave_plate(WavePlate::Half, PI / 8.0);
        let psi = bell_state(BellKind::PsiPlus);
        let out = apply_two_qubit(&hwp, &hwp, &psi);
        for (a, b) in [(PolBasis::H, PolBasis::V), (PolBasis::V, PolBasis::H)] {
            assert_abs_diff_eq!(analyzer_projection(&out, a, b), 0.0, epsilon = 1e-15);
        }
        for (a, b) in [
            (PolBasis::Plus, PolBasis::Minus),
            (PolBasis::Minus, PolBasis::Plus),
        ] {
            assert_abs_diff_eq!(analyzer_projection(&psi, a, b), 0.0, epsilon = 1e-15);
        }
        // In the rotated frame ψ⁺ reads (|++⟩ − |−−⟩)/√2.
        let s = FRAC_1_SQRT_2;
        let expected = TwoPhotonPolState::normalize(
            PolVector::product(PolBasis::Plus.jones(), PolBasis::Plus.jones()) * s
                - PolVector::product(PolBasis::Minus.jones(), PolBasis::Minus.jones()) * s,
        )
        .unwrap();
        assert_abs_diff_eq!(
            bell_state(BellKind::PsiPlus).fidelity(&expected),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn quarter_wave_plates_turn_psi_plus_into_psi_minus() {
        let qwp = wave_plate(WavePlate::Quarter, 0.0);
        let id = LocalUnitary::identity();
        let psi_plus = bell_state(BellKind::PsiPlus);

        let once = apply_two_qubit(&id, &qwp, &psi_plus);
        // V₂ picks up a relative phase i.
        let ratio = once.vector().component(0, 1) / once.vector().component(1, 0);
        assert_abs_diff_eq!((ratio - Complex64::i()).norm(), 0.0, epsilon = 1e-15);

        let twice = apply_two_qubit(&id, &qwp.then_after(&qwp), &psi_plus);
        assert_abs_diff_eq!(
            twice.fidelity(&bell_state(BellKind::PsiMinus)),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn exchange_projection_examples() {
        let psi_minus = bell_state(BellKind::PsiMinus);
        let (sym, anti) = exchange_projections(psi_minus.vector());
        assert_vec_eq(&sym, &PolVector::ZERO, 1e-16);
        assert_vec_eq(&anti, psi_minus.vector(), 1e-16);

        let psi_plus = bell_state(BellKind::PsiPlus);
        let (sym, anti) = exchange_projections(psi_plus.vector());
        assert_vec_eq(&sym, psi_plus.vector(), 1e-16);
        assert_vec_eq(&anti, &PolVector::ZERO, 1e-16);

        let hh = PolVector::product(PolBasis::H.jones(), PolBasis::H.jones());
        let (sym, anti) = exchange_projections(&hh);
        assert_vec_eq(&sym, &hh, 0.0);
        assert_vec_eq(&anti, &PolVector::ZERO, 0.0);
    }

    #[test]
    fn analyzer_examples() {
        let psi_minus = bell_state(BellKind::PsiMinus);
        assert_abs_diff_eq!(
            analyzer_projection(&psi_minus, PolBasis::H, PolBasis::V),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(
            analyzer_projection(&psi_minus, PolBasis::H, PolBasis::H),
            0.0
        );
        assert_abs_diff_eq!(
            analyzer_projection(
                &bell_state(BellKind::PsiPlus),
                PolBasis::Plus,
                PolBasis::Minus
            ),
            0.0,
            epsilon = 1e-16
        );
    }

    #[test]
    fn bell_kind_parses_its_name() {
        for kind in BellKind::ALL {
            assert_eq!(kind.name().parse::<BellKind>().unwrap(), kind);
        }
        assert!("psi".parse::<BellKind>().is_err());
    }

    fn arb_state() -> impl Strategy<Value = TwoPhotonPolState> {
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |a| a.iter().any(|x| x.abs() > 1e-3))
            .prop_map(|a| {
                TwoPhotonPolState::new(std::array::from_fn(|i| {
                    Complex64::new(a[2 * i], a[2 * i + 1])
                }))
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn wave_plates_are_unitary(angle in -PI..PI, half in any::<bool>()) {
            let kind = if half { WavePlate::Half } else { WavePlate::Quarter };
            prop_assert!(wave_plate(kind, angle).unitarity_deviation() <= 1e-12);
        }

        #[test]
        fn analyzer_probabilities_complete(s in arb_state(), hv in any::<bool>()) {
            let (a, b) = if hv { (PolBasis::H, PolBasis::V) } else { (PolBasis::Plus, PolBasis::Minus) };
            let total: f64 = [(a, a), (a, b), (b, a), (b, b)]
                .iter()
                .map(|&(x, y)| analyzer_projection(&s, x, y))
                .sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn exchange_parts_reassemble(s in arb_state()) {
            let (sym, anti) = exchange_projections(s.vector());
            prop_assert!((sym + anti - *s.vector()).max_abs() <= 1e-15);
            // antisymmetric part lies along ψ⁻
            let psi = bell_state(BellKind::PsiMinus);
            let along = *psi.vector() * psi.vector().inner(&anti);
            prop_assert!((anti - along).max_abs() <= 1e-15);
            prop_assert!(sym.inner(&anti).norm() <= 1e-15);
        }

        #[test]
        fn local_unitaries_preserve_norm(seed in any::<u64>(), s in arb_state()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u1 = LocalUnitary::haar_random(&mut rng);
            let u2 = LocalUnitary::haar_random(&mut rng);
            prop_assert!(u1.unitarity_deviation() <= 1e-12);
            let out = apply_two_qubit(&u1, &u2, &s);
            prop_assert!((out.vector().norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
