//! Constitutive relations and per-field system builders for the coupled
//! displacement, damage, fatigue, temperature and voltage problem.
//!
//! Each `build_*` function returns the assembled tridiagonal system with its
//! boundary conditions applied; the caller solves it. Damage is clamped to
//! `[0, 1]` after every solve, so only the `[0, 1]` branches of the damage
//! potentials enter the discrete operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{assemble, integrate_elements, nodal_gradient, ElementKernel, LinearSystem, QuadPoint};
use crate::mesh::Mesh1D;
use crate::scalar::Real;
use crate::units::W_PER_IN2_IN_W_PER_M2;

/// Material constants of the conductor (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams<T> {
    /// Young modulus `Y` (Pa).
    pub youngs_modulus: T,
    /// Damage layer width `γ` (m).
    pub damage_width: T,
    /// Fracture energy `g_c` (N/m).
    pub fracture_energy: T,
    /// Density `ρ` (kg/m³).
    pub density: T,
    /// Aging rate `a` (m⁵/(yr·kg)).
    pub aging_rate: T,
    /// Thermal conductivity `κ` (W/(m·K)).
    pub thermal_conductivity: T,
    /// Electrical conductivity at the reference temperature `σ_E,0` (S/m).
    pub electrical_conductivity: T,
    /// Temperature coefficient of resistivity `α` (1/K).
    pub resistivity_coefficient: T,
    /// Linear thermal expansion coefficient `α_L` (1/K).
    pub thermal_expansion: T,
    /// Reference temperature `θ0` (K).
    pub reference_temperature: T,
}

impl<T: Real> MaterialParams<T> {
    /// Aluminium conductor reference values.
    pub fn aluminium() -> Self {
        Self {
            youngs_modulus: T::lit(69e9),
            damage_width: T::lit(0.02),
            fracture_energy: T::lit(10e3),
            density: T::lit(2700.0),
            aging_rate: T::lit(1e-10),
            thermal_conductivity: T::lit(237.0),
            electrical_conductivity: T::lit(3.77e7),
            resistivity_coefficient: T::lit(3.9e-3),
            thermal_expansion: T::lit(23e-6),
            reference_temperature: T::lit(288.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("youngs_modulus", self.youngs_modulus),
            ("damage_width", self.damage_width),
            ("fracture_energy", self.fracture_energy),
            ("density", self.density),
            ("aging_rate", self.aging_rate),
            ("thermal_conductivity", self.thermal_conductivity),
            ("electrical_conductivity", self.electrical_conductivity),
            ("resistivity_coefficient", self.resistivity_coefficient),
            ("thermal_expansion", self.thermal_expansion),
            ("reference_temperature", self.reference_temperature),
        ];
        for (name, v) in fields {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "material parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl<T: Real> Default for MaterialParams<T> {
    fn default() -> Self {
        Self::aluminium()
    }
}

/// Nodal fields at one time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState<T> {
    /// Displacement (m).
    pub u: Vec<T>,
    /// Damage phase field (-).
    pub phi: Vec<T>,
    /// Fatigue / aging (N/m).
    pub fatigue: Vec<T>,
    /// Temperature (K).
    pub theta: Vec<T>,
    /// Voltage (V).
    pub voltage: Vec<T>,
    /// Strain-energy history (Pa).
    pub history: Vec<T>,
    /// Time (yr).
    pub time: T,
}

impl<T: Real> FieldState<T> {
    /// Virgin conductor at air temperature, no load.
    pub fn initial(n_nodes: usize, theta_air: T) -> Self {
        Self {
            u: vec![T::zero(); n_nodes],
            phi: vec![T::zero(); n_nodes],
            fatigue: vec![T::zero(); n_nodes],
            theta: vec![theta_air; n_nodes],
            voltage: vec![T::zero(); n_nodes],
            history: vec![T::zero(); n_nodes],
            time: T::zero(),
        }
    }
}

/// `d(φ) = (1 - φ)²`.
#[inline]
pub fn degradation<T: Real>(phi: T) -> T {
    let r = T::one() - phi;
    r * r
}

/// Damage potentials and their derivatives at one value of `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials<T> {
    pub h: T,
    pub dh: T,
    pub hf: T,
    pub dhf: T,
}

/// Piecewise damage potentials with linear extensions of slope `delta`
/// outside `[0, 1]`.
pub fn potentials<T: Real>(phi: T, delta: T) -> Potentials<T> {
    let half = T::lit(0.5);
    if phi > T::one() {
        Potentials {
            h: half + delta * (phi - T::one()),
            dh: delta,
            hf: -T::one(),
            dhf: T::zero(),
        }
    } else if phi < T::zero() {
        Potentials {
            h: -delta * phi,
            dh: -delta,
            hf: T::zero(),
            dhf: T::zero(),
        }
    } else {
        Potentials {
            h: half * phi * phi,
            dh: phi,
            hf: -phi,
            dhf: -T::one(),
        }
    }
}

/// Convective exchange with the surrounding air, in the handbook's native
/// units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatExchange<T> {
    /// Atmospheric pressure (atm).
    pub pressure: T,
    /// Wind speed (ft/s).
    pub wind_speed: T,
    /// Air temperature (K).
    pub theta_air: T,
    /// Conductor diameter (in).
    pub diameter: T,
}

/// Forced-convection coefficient in W/(m²·K):
/// `0.0128 √(p v) / (θ_air^0.123 √d)` W/(in²·K), converted to SI.
pub fn cooling_coefficient<T: Real>(hx: &HeatExchange<T>) -> T {
    let pv = (hx.pressure * hx.wind_speed).max(T::zero());
    let per_in2 = T::lit(0.0128) * pv.sqrt() / (hx.theta_air.powf(T::lit(0.123)) * hx.diameter.sqrt());
    per_in2 * T::lit(W_PER_IN2_IN_W_PER_M2)
}

/// Temperature-adjusted conductivity `σ_E,T = σ_E,0 / (1 + α(θ - θ0))`.
pub fn conductivity_at_temperature<T: Real>(theta: T, params: &MaterialParams<T>) -> Result<T> {
    let denom = T::one() + params.resistivity_coefficient * (theta - params.reference_temperature);
    if !(denom > T::zero()) {
        return Err(Error::NonPhysicalTemperature {
            theta: theta.to_f64_lossy(),
        });
    }
    Ok(params.electrical_conductivity / denom)
}

/// Degraded, temperature-adjusted conductivity `(1 - φ)² σ_E,T`.
pub fn conductivity<T: Real>(phi: T, theta: T, params: &MaterialParams<T>) -> Result<T> {
    Ok(degradation(phi) * conductivity_at_temperature(theta, params)?)
}

fn check_lengths<T: Real>(mesh: &Mesh1D<T>, fields: &[&[T]]) -> Result<()> {
    fields.iter().try_for_each(|f| mesh.check_nodal(f))
}

struct Mechanical<'a, T> {
    phi: &'a [T],
    params: &'a MaterialParams<T>,
}

impl<T: Real> ElementKernel<T> for Mechanical<'_, T> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        degradation(qp.interp(self.phi)) * self.params.youngs_modulus * qp.area()
    }
    fn load_gradient(&self, qp: &QuadPoint<'_, T>) -> T {
        let dphi = qp.grad(self.phi);
        self.params.damage_width * self.params.fracture_energy * qp.area() * dphi * dphi
    }
}

/// First element whose mean degraded-stiffness factor has vanished.
fn severed_element<T: Real>(mesh: &Mesh1D<T>, phi: &[T]) -> Option<usize> {
    let tol = T::lit(1e-12);
    integrate_elements(mesh, |qp| degradation(qp.interp(phi)))
        .iter()
        .enumerate()
        .position(|(e, &f)| f / mesh.element_len(e) < tol)
}

fn element_mid<T: Real>(mesh: &Mesh1D<T>, e: usize) -> f64 {
    (T::lit(0.5) * (mesh.node_x[e] + mesh.node_x[e + 1])).to_f64_lossy()
}

/// Equilibrium of the degraded bar: `u = 0` at `x = 0`, horizontal tension
/// `h_load` applied at `x = L`, no body force.
pub fn build_mechanical<T: Real>(
    mesh: &Mesh1D<T>,
    phi: &[T],
    h_load: T,
    params: &MaterialParams<T>,
) -> Result<LinearSystem<T>> {
    check_lengths(mesh, &[phi])?;
    if let Some(e) = severed_element(mesh, phi) {
        return Err(Error::MaterialSevered {
            x: element_mid(mesh, e),
        });
    }
    let mut sys = assemble(mesh, &Mechanical { phi, params });
    sys.add_point_load(mesh.n_nodes() - 1, h_load);
    sys.apply_dirichlet(0, T::zero())?;
    Ok(sys)
}

/// Strain-energy history `max(ℍ_old, Y (du/dx)²)` with nodal gradients.
pub fn update_history<T: Real>(
    mesh: &Mesh1D<T>,
    history: &[T],
    u: &[T],
    params: &MaterialParams<T>,
) -> Result<Vec<T>> {
    check_lengths(mesh, &[history, u])?;
    let grad = nodal_gradient(mesh, u);
    Ok(history
        .iter()
        .zip(&grad)
        .map(|(&h, &g)| h.max(g * params.youngs_modulus * g))
        .collect())
}

struct Damage<'a, T> {
    history: &'a [T],
    fatigue: &'a [T],
    params: &'a MaterialParams<T>,
}

impl<T: Real> ElementKernel<T> for Damage<'_, T> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        self.params.damage_width * self.params.fracture_energy * qp.area()
    }
    fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
        let p = self.params;
        (qp.interp(self.history) + p.fracture_energy / p.damage_width) * qp.area()
    }
    fn load(&self, qp: &QuadPoint<'_, T>) -> T {
        // -𝓕 H_f'(φ) with H_f' = -1 on [0, 1]
        let p = self.params;
        (qp.interp(self.history) + qp.interp(self.fatigue) / p.damage_width) * qp.area()
    }
}

/// Damage equation driven by the strain-energy history and fatigue, with
/// zero-gradient ends.
pub fn build_damage<T: Real>(
    mesh: &Mesh1D<T>,
    history: &[T],
    fatigue: &[T],
    params: &MaterialParams<T>,
) -> Result<LinearSystem<T>> {
    check_lengths(mesh, &[history, fatigue])?;
    Ok(assemble(mesh, &Damage { history, fatigue, params }))
}

/// Clamps damage into `[0, 1]` and returns the largest overshoot removed.
pub fn clamp_damage<T: Real>(phi: &mut [T]) -> T {
    let mut overshoot = T::zero();
    for p in phi.iter_mut() {
        let clamped = p.max(T::zero()).min(T::one());
        overshoot = overshoot.max((*p - clamped).abs());
        *p = clamped;
    }
    overshoot
}

/// Nodal fatigue rate `-F̂ H_f(φ) / γ` with
/// `F̂ = ρ a (θ/θ0)(1 - φ)|Y du/dx|`.
pub fn fatigue_rate<T: Real>(
    mesh: &Mesh1D<T>,
    u: &[T],
    phi: &[T],
    theta: &[T],
    params: &MaterialParams<T>,
) -> Result<Vec<T>> {
    check_lengths(mesh, &[u, phi, theta])?;
    let grad = nodal_gradient(mesh, u);
    let p = params;
    Ok((0..mesh.n_nodes())
        .map(|i| {
            let f_hat = p.density * p.aging_rate * (theta[i] / p.reference_temperature)
                * (T::one() - phi[i])
                * (p.youngs_modulus * grad[i]).abs();
            let hf = potentials(phi[i], T::zero()).hf;
            -f_hat * hf / p.damage_width
        })
        .collect())
}

/// One forward-Euler fatigue step with a row-sum lumped mass, clamped
/// below at zero.
pub fn step_fatigue<T: Real>(
    mesh: &Mesh1D<T>,
    fatigue: &[T],
    u: &[T],
    phi: &[T],
    theta: &[T],
    params: &MaterialParams<T>,
    dt: T,
) -> Result<Vec<T>> {
    check_lengths(mesh, &[fatigue])?;
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let rate = fatigue_rate(mesh, u, phi, theta, params)?;

    struct Lumped<'a, T>(&'a [T]);
    impl<T: Real> ElementKernel<T> for Lumped<'_, T> {
        fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
            qp.area()
        }
        fn load(&self, qp: &QuadPoint<'_, T>) -> T {
            qp.interp(self.0) * qp.area()
        }
    }
    let sys = assemble(mesh, &Lumped(&rate));
    let mass = sys.row_sums();
    Ok(fatigue
        .iter()
        .zip(mass.iter().zip(&sys.rhs))
        .map(|(&f, (&m, &w))| (f + dt * w / m).max(T::zero()))
        .collect())
}

struct Thermal<'a, T> {
    phi: &'a [T],
    voltage: &'a [T],
    theta_prev: &'a [T],
    cooling: T,
    theta_air: T,
    params: &'a MaterialParams<T>,
}

impl<T: Real> Thermal<'_, T> {
    fn sigma(&self, qp: &QuadPoint<'_, T>) -> T {
        // validated before assembly
        conductivity(qp.interp(self.phi), qp.interp(self.theta_prev), self.params)
            .unwrap_or_else(|_| T::zero())
    }
}

impl<T: Real> ElementKernel<T> for Thermal<'_, T> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        self.params.thermal_conductivity * qp.area()
    }
    fn mass(&self, qp: &QuadPoint<'_, T>) -> T {
        self.cooling * qp.surface()
    }
    fn load(&self, qp: &QuadPoint<'_, T>) -> T {
        let e = qp.grad(self.voltage);
        self.sigma(qp) * qp.area() * e * e + self.cooling * qp.surface() * self.theta_air
    }
}

fn check_temperatures<T: Real>(theta: &[T], params: &MaterialParams<T>) -> Result<()> {
    theta
        .iter()
        .try_for_each(|&t| conductivity_at_temperature(t, params).map(|_| ()))
}

/// Steady heat balance: conduction, Joule source from the voltage field and
/// convective exchange, with zero-flux ends.
///
/// Conductivity is evaluated at `theta_prev`.
pub fn build_thermal<T: Real>(
    mesh: &Mesh1D<T>,
    phi: &[T],
    voltage: &[T],
    theta_prev: &[T],
    cooling: T,
    theta_air: T,
    params: &MaterialParams<T>,
) -> Result<LinearSystem<T>> {
    check_lengths(mesh, &[phi, voltage, theta_prev])?;
    if !(cooling > T::zero()) {
        return Err(Error::NoCooling);
    }
    check_temperatures(theta_prev, params)?;
    Ok(assemble(
        mesh,
        &Thermal {
            phi,
            voltage,
            theta_prev,
            cooling,
            theta_air,
            params,
        },
    ))
}

struct Electrical<'a, T> {
    phi: &'a [T],
    theta: &'a [T],
    params: &'a MaterialParams<T>,
}

impl<T: Real> ElementKernel<T> for Electrical<'_, T> {
    fn stiffness(&self, qp: &QuadPoint<'_, T>) -> T {
        conductivity(qp.interp(self.phi), qp.interp(self.theta), self.params)
            .unwrap_or_else(|_| T::zero())
            * qp.area()
    }
}

/// Current conservation: `V = 0` at `x = 0`, total current `|I|` entering
/// at `x = L`.
pub fn build_voltage<T: Real>(
    mesh: &Mesh1D<T>,
    phi: &[T],
    theta: &[T],
    current: T,
    params: &MaterialParams<T>,
) -> Result<LinearSystem<T>> {
    check_lengths(mesh, &[phi, theta])?;
    check_temperatures(theta, params)?;
    let factors = integrate_elements(mesh, |qp| degradation(qp.interp(phi)));
    for (e, f) in factors.iter().enumerate() {
        let rel = *f / mesh.element_len(e);
        if rel < T::lit(1e-12) {
            return Err(Error::ConductorSevered {
                x: element_mid(mesh, e),
            });
        }
        if rel < T::lit(1e-8) {
            log::warn!(
                "voltage system near-singular: conductivity degraded to {:.3e} of virgin near x = {} m",
                rel.to_f64_lossy(),
                element_mid(mesh, e)
            );
        }
    }
    let mut sys = assemble(mesh, &Electrical { phi, theta, params });
    sys.add_point_load(mesh.n_nodes() - 1, current.abs());
    sys.apply_dirichlet(0, T::zero())?;
    Ok(sys)
}

/// Current carried by each element, `(∫ σ_E A dx / h) dV/dx`.
pub fn element_current<T: Real>(
    mesh: &Mesh1D<T>,
    phi: &[T],
    theta: &[T],
    voltage: &[T],
    params: &MaterialParams<T>,
) -> Result<Vec<T>> {
    check_lengths(mesh, &[phi, theta, voltage])?;
    check_temperatures(theta, params)?;
    let conductance = integrate_elements(mesh, |qp| {
        conductivity(qp.interp(phi), qp.interp(theta), params).unwrap_or_else(|_| T::zero()) * qp.area()
    });
    Ok(conductance
        .iter()
        .enumerate()
        .map(|(e, &g)| {
            let h = mesh.element_len(e);
            g / h * (voltage[e + 1] - voltage[e]) / h
        })
        .collect())
}

/// Voltage drop between the ends of the span.
pub fn voltage_drop<T: Real>(voltage: &[T]) -> T {
    match (voltage.first(), voltage.last()) {
        (Some(&a), Some(&b)) => (b - a).abs(),
        _ => T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> MaterialParams<f64> {
        MaterialParams::aluminium()
    }

    fn bar() -> Mesh1D<f64> {
        Mesh1D::uniform(200.0, 50, 1.2566e-3).unwrap()
    }

    #[test]
    fn degradation_values() {
        assert_eq!(degradation(0.0), 1.0);
        assert_eq!(degradation(1.0), 0.0);
        assert_eq!(degradation(0.5), 0.25);
    }

    #[test]
    fn potential_branches() {
        let p0 = potentials(0.0, 2.0);
        assert_eq!((p0.h, p0.dh, p0.hf, p0.dhf), (0.0, 0.0, 0.0, -1.0));
        let p1 = potentials(1.0, 2.0);
        assert_eq!((p1.h, p1.hf), (0.5, -1.0));
        let p = potentials(0.6, 2.0);
        assert_relative_eq!(p.h, 0.18, max_relative = 1e-15);
        assert_eq!((p.dh, p.hf), (0.6, -0.6));
        let above = potentials(1.5, 2.0);
        assert_eq!((above.h, above.dh, above.hf, above.dhf), (1.5, 2.0, -1.0, 0.0));
        let below = potentials(-0.5, 2.0);
        assert_eq!((below.h, below.dh, below.hf, below.dhf), (1.0, -2.0, 0.0, 0.0));
    }

    #[test]
    fn cooling_reference_value() {
        let d_in: f64 = 0.04 / 0.0254;
        let hx = HeatExchange {
            pressure: 1.0,
            wind_speed: 2.0,
            theta_air: 288.0,
            diameter: d_in,
        };
        let expected = 0.0128 * 2f64.sqrt() / (288f64.powf(0.123) * d_in.sqrt()) * 1550.0031;
        assert_relative_eq!(cooling_coefficient(&hx), expected, max_relative = 1e-8);
        let still = HeatExchange { wind_speed: 0.0, ..hx };
        assert_eq!(cooling_coefficient(&still), 0.0);
        let gusty = HeatExchange { wind_speed: 8.0, ..hx };
        assert_relative_eq!(cooling_coefficient(&gusty), 2.0 * cooling_coefficient(&hx), max_relative = 1e-14);
    }

    #[test]
    fn conductivity_values() {
        let p = params();
        assert_eq!(conductivity(0.0, 288.0, &p).unwrap(), 3.77e7);
        assert_eq!(conductivity(1.0, 300.0, &p).unwrap(), 0.0);
        assert_relative_eq!(conductivity(0.0, 388.0, &p).unwrap(), 3.77e7 / 1.39, max_relative = 1e-14);
        assert!(matches!(
            conductivity(0.0, -10.0, &p),
            Err(Error::NonPhysicalTemperature { .. })
        ));
    }

    #[test]
    fn bar_under_traction() {
        let mesh = bar();
        let p = params();
        let phi = vec![0.0; mesh.n_nodes()];
        let u = build_mechanical(&mesh, &phi, 40e3, &p).unwrap().solve().unwrap();
        let a = mesh.area[0];
        for e in 0..mesh.n_elements() {
            let stress = p.youngs_modulus * (u[e + 1] - u[e]) / mesh.element_len(e);
            assert_relative_eq!(stress, 40e3 / a, max_relative = 1e-10);
        }
        assert_eq!(u[0], 0.0);

        let unloaded = build_mechanical(&mesh, &phi, 0.0, &p).unwrap().solve().unwrap();
        assert!(unloaded.iter().all(|&v| v == 0.0));

        let half = vec![0.5; mesh.n_nodes()];
        let degraded = build_mechanical(&mesh, &half, 40e3, &p).unwrap().solve().unwrap();
        for (d, v) in degraded.iter().zip(&u).skip(1) {
            assert_relative_eq!(*d, 4.0 * v, max_relative = 1e-10);
        }
    }

    #[test]
    fn severed_bar_is_reported() {
        let mesh = bar();
        let mut phi = vec![0.0; mesh.n_nodes()];
        phi[20] = 1.0;
        phi[21] = 1.0;
        match build_mechanical(&mesh, &phi, 1.0, &params()) {
            Err(Error::MaterialSevered { x }) => assert_relative_eq!(x, 82.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn history_is_a_running_maximum() {
        let mesh = Mesh1D::uniform(2.0, 2, 1.0).unwrap();
        let p = params();
        let eps = 1e-4;
        let u = [0.0, eps, 2.0 * eps];
        let h1 = update_history(&mesh, &[0.0; 3], &u, &p).unwrap();
        for &h in &h1 {
            assert_relative_eq!(h, p.youngs_modulus * eps * eps, max_relative = 1e-14);
        }
        let h2 = update_history(&mesh, &h1, &[0.0, eps / 2.0, eps], &p).unwrap();
        assert_eq!(h2, h1);
        let h3 = update_history(&mesh, &h1, &[0.0, 2.0 * eps, 4.0 * eps], &p).unwrap();
        for (a, b) in h3.iter().zip(&h1) {
            assert_relative_eq!(*a, 4.0 * b, max_relative = 1e-14);
        }
    }

    #[test]
    fn damage_zero_dimensional_limits() {
        let mesh = bar();
        let p = params();
        let n = mesh.n_nodes();
        let zero = vec![0.0; n];
        let phi = build_damage(&mesh, &zero, &zero, &p).unwrap().solve().unwrap();
        assert!(phi.iter().all(|&v| v == 0.0));

        let h0 = 2.5e4;
        let phi = build_damage(&mesh, &vec![h0; n], &zero, &p).unwrap().solve().unwrap();
        let expected = h0 / (h0 + p.fracture_energy / p.damage_width);
        for v in phi {
            assert_relative_eq!(v, expected, max_relative = 1e-10);
        }

        let f0 = 3e3;
        let phi = build_damage(&mesh, &zero, &vec![f0; n], &p).unwrap().solve().unwrap();
        for v in phi {
            assert_relative_eq!(v, f0 / p.fracture_energy, max_relative = 1e-10);
        }
    }

    #[test]
    fn clamping_reports_overshoot() {
        let mut phi = vec![-0.01, 0.5, 1.03];
        let over = clamp_damage(&mut phi);
        assert_eq!(phi, vec![0.0, 0.5, 1.0]);
        assert_relative_eq!(over, 0.03, max_relative = 1e-12);
    }

    #[test]
    fn fatigue_update_zero_dimensional() {
        let mesh = bar();
        let p = params();
        let n = mesh.n_nodes();
        let strain = 4e-4;
        let u: Vec<f64> = mesh.node_x.iter().map(|x| strain * x).collect();
        let theta = vec![p.reference_temperature; n];
        let f0 = vec![1.0; n];
        let dt = 0.01;

        for fixed in [0.0, 1.0] {
            let phi = vec![fixed; n];
            let f = step_fatigue(&mesh, &f0, &u, &phi, &theta, &p, dt).unwrap();
            assert_eq!(f, f0);
        }

        let phi = vec![0.5; n];
        let f = step_fatigue(&mesh, &f0, &u, &phi, &theta, &p, dt).unwrap();
        let s0 = p.youngs_modulus * strain;
        let expected = dt * p.density * p.aging_rate * 0.25 * s0 / p.damage_width;
        for v in f {
            assert_relative_eq!(v - 1.0, expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn thermal_balance() {
        let mesh = Mesh1D::uniform(200.0, 40, 1.2566e-3).unwrap();
        let p = params();
        let n = mesh.n_nodes();
        let phi = vec![0.0; n];
        let theta_prev = vec![p.reference_temperature; n];
        let c = 11.0;

        let flat = vec![3.0; n];
        let theta = build_thermal(&mesh, &phi, &flat, &theta_prev, c, 290.0, &p)
            .unwrap()
            .solve()
            .unwrap();
        for t in theta {
            assert_relative_eq!(t, 290.0, max_relative = 1e-12);
        }

        let e0 = 0.03;
        let v: Vec<f64> = mesh.node_x.iter().map(|x| e0 * x).collect();
        let excess = |c: f64| {
            let th = build_thermal(&mesh, &phi, &v, &theta_prev, c, 290.0, &p)
                .unwrap()
                .solve()
                .unwrap();
            th[n / 3] - 290.0
        };
        let oracle = p.electrical_conductivity * mesh.area[0] * e0 * e0 / (c * mesh.surf_per_len[0]);
        assert_relative_eq!(excess(c), oracle, max_relative = 1e-8);
        assert_relative_eq!(excess(2.0 * c), oracle / 2.0, max_relative = 1e-8);

        assert_eq!(
            build_thermal(&mesh, &phi, &v, &theta_prev, 0.0, 290.0, &p),
            Err(Error::NoCooling)
        );
    }

    #[test]
    fn ohmic_drop() {
        let mesh = bar();
        let p = params();
        let n = mesh.n_nodes();
        let theta = vec![p.reference_temperature; n];
        let i = -1500.0;
        let solve = |phi: &[f64], current: f64| {
            build_voltage(&mesh, phi, &theta, current, &p).unwrap().solve().unwrap()
        };
        let v = solve(&vec![0.0; n], i);
        let oracle = 1500.0 * 200.0 / (p.electrical_conductivity * mesh.area[0]);
        assert_relative_eq!(voltage_drop(&v), oracle, max_relative = 1e-10);
        assert!(solve(&vec![0.0; n], 0.0).iter().all(|&x| x == 0.0));
        let damaged = solve(&vec![0.5; n], i);
        assert_relative_eq!(voltage_drop(&damaged), 4.0 * oracle, max_relative = 1e-10);
    }

    #[test]
    fn current_conserved_through_nonuniform_bar() {
        let mesh = Mesh1D::build(200.0, 60, 1.2566e-3, 2.5).unwrap();
        let p = params();
        let phi: Vec<f64> = mesh
            .node_x
            .iter()
            .map(|x| 0.6 * (-(x - 100.0f64).powi(2) / 20.0).exp())
            .collect();
        let theta: Vec<f64> = mesh.node_x.iter().map(|x| 300.0 + 0.1 * x).collect();
        let v = build_voltage(&mesh, &phi, &theta, 1600.0, &p).unwrap().solve().unwrap();
        let flux = element_current(&mesh, &phi, &theta, &v, &p).unwrap();
        for f in flux {
            assert_relative_eq!(f, 1600.0, max_relative = 1e-8);
        }
    }
}
