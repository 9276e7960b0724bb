//! Plane-strain Q4 finite elements.
//!
//! Each time step is solved with a staggered fixed-point scheme on the secant
//! (Reuss) stiffness. Pass 0 freezes the Gauss-point states of the previous
//! step. Every later pass updates every Gauss point from the previous step
//! state with the strains of the last displacement field, then re-solves
//! `K(C_eff) u = f_p(C_eff eps_p_eff)` with the prescribed displacements
//! eliminated. Passes stop once `|du| <= 1e-8 |u|`. A step that does not
//! settle within the pass limit is split into halves, at most four times.

pub mod element;
pub mod mesh;
pub mod skyline;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::energy::effective_elasticity;
use crate::evolution::{step, Material, RegularizationParams};
use crate::phase::MixtureState;
use crate::tensor::{SymTensor2, XX, XY, YY};
use crate::{Error, Result};

pub use element::{element_stiffness, Coords, ElementMatrix};
pub use mesh::Mesh;
use skyline::{reverse_cuthill_mckee, SkylineMatrix};

pub const MAX_PASSES: usize = 20;
pub const PASS_TOLERANCE: f64 = 1e-8;
pub const MAX_HALVINGS: u32 = 4;

/// Prescribed displacement components, keyed by `2 node + component`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryConditions {
    values: BTreeMap<usize, f64>,
}

impl BoundaryConditions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn prescribe(&mut self, node: usize, component: usize, value: f64) -> Result<()> {
        if component > 1 || !value.is_finite() {
            return Err(Error::InvalidParameter {
                name: "boundary condition",
                value: component as f64,
            });
        }
        let dof = 2 * node + component;
        match self.values.get(&dof) {
            Some(&v) if v != value => Err(Error::InvalidMesh(alloc::format!(
                "node {node} component {component} prescribed twice ({v} and {value})"
            ))),
            _ => {
                self.values.insert(dof, value);
                Ok(())
            }
        }
    }

    pub fn prescribe_set(&mut self, mesh: &Mesh, set: &str, component: usize, value: f64) -> Result<()> {
        let nodes = mesh
            .node_set(set)
            .ok_or_else(|| Error::InvalidMesh(alloc::format!("no node set named '{set}'")))?;
        for &n in nodes {
            self.prescribe(n, component, value)?;
        }
        Ok(())
    }

    pub fn values(&self) -> &BTreeMap<usize, f64> {
        &self.values
    }

    fn same_dofs(&self, other: &BoundaryConditions) -> bool {
        self.values.keys().eq(other.values.keys())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussPointState {
    pub state: MixtureState,
    pub strain: SymTensor2,
    pub stress: SymTensor2,
    /// Accumulated dissipation density.
    pub dissipation: f64,
}

/// Nodal displacements `(u_x, u_y)` interleaved, and four Gauss points per
/// element in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct FemState {
    pub u: Vec<f64>,
    pub points: Vec<GaussPointState>,
}

impl FemState {
    /// Undeformed body with every Gauss point in `state`.
    pub fn uniform(mesh: &Mesh, state: &MixtureState, material: &Material) -> Result<Self> {
        state.validate()?;
        if state.k() != material.k() || state.dim() != crate::tensor::Dim::Two {
            return Err(Error::InvalidState("initial state must be plane strain with k phases".into()));
        }
        let strain = SymTensor2::zero(crate::tensor::Dim::Two);
        let stress = crate::energy::stress(&strain, state, &material.phases)?;
        let gp = GaussPointState {
            state: state.clone(),
            strain,
            stress,
            dissipation: 0.0,
        };
        Ok(FemState {
            u: vec![0.0; 2 * mesh.n_nodes()],
            points: vec![gp; 4 * mesh.n_elements()],
        })
    }

    pub fn point(&self, element: usize, gp: usize) -> &GaussPointState {
        &self.points[4 * element + gp]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Fixed-point passes summed over sub-steps.
    pub passes: usize,
    /// Number of sub-steps the step was split into.
    pub substeps: usize,
    /// Last relative displacement increment.
    pub increment: f64,
    /// `|f_int|` on free dofs after the final pass.
    pub residual: f64,
    /// `|f_int|` on prescribed dofs.
    pub reaction: f64,
}

/// Equation numbering and geometric data for one mesh and one set of
/// prescribed dofs.
pub struct FemSolver<'a> {
    mesh: &'a Mesh,
    material: &'a Material,
    gauss: Vec<[([[f64; 8]; 3], f64); 4]>,
    equation: Vec<Option<usize>>,
    first_row: Vec<usize>,
    n_free: usize,
    prescribed: BoundaryConditions,
}

fn element_dofs(conn: &[usize; 4]) -> [usize; 8] {
    let mut d = [0; 8];
    for a in 0..4 {
        d[2 * a] = 2 * conn[a];
        d[2 * a + 1] = 2 * conn[a] + 1;
    }
    d
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn plane_strain(e: [f64; 3]) -> SymTensor2 {
    SymTensor2::plane(e[0], e[1], 0.5 * e[2])
}

impl<'a> FemSolver<'a> {
    /// `bcs` fixes which dofs are prescribed; their values may change per step.
    pub fn new(mesh: &'a Mesh, material: &'a Material, bcs: &BoundaryConditions) -> Result<Self> {
        if material.dim() != crate::tensor::Dim::Two {
            return Err(Error::InvalidParameter {
                name: "dimension",
                value: material.dim().spatial() as f64,
            });
        }
        let n_dof = 2 * mesh.n_nodes();
        if let Some((&d, _)) = bcs.values.iter().next_back() {
            if d >= n_dof {
                return Err(Error::InvalidMesh(alloc::format!("prescribed dof {d} out of range")));
            }
        }
        let gauss = (0..mesh.n_elements())
            .map(|e| element::gauss_data(&mesh.element_coords(e)))
            .collect::<Result<Vec<_>>>()?;
        let order = reverse_cuthill_mckee(&mesh.node_graph());
        let mut equation = vec![None; n_dof];
        let mut n_free = 0;
        for &node in &order {
            for c in 0..2 {
                let d = 2 * node + c;
                if !bcs.values.contains_key(&d) {
                    equation[d] = Some(n_free);
                    n_free += 1;
                }
            }
        }
        let mut first_row: Vec<usize> = (0..n_free).collect();
        for conn in mesh.elements() {
            let eqs: Vec<usize> = element_dofs(conn).iter().filter_map(|&d| equation[d]).collect();
            if let Some(&lo) = eqs.iter().min() {
                for &q in &eqs {
                    first_row[q] = first_row[q].min(lo);
                }
            }
        }
        Ok(FemSolver {
            mesh,
            material,
            gauss,
            equation,
            first_row,
            n_free,
            prescribed: bcs.clone(),
        })
    }

    pub fn mesh(&self) -> &Mesh {
        self.mesh
    }

    pub fn n_free(&self) -> usize {
        self.n_free
    }

    /// `w det J` of every Gauss point.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.gauss.iter().flat_map(|g| g.iter().map(|(_, w)| *w))
    }

    fn element_u(&self, u: &[f64], e: usize) -> [f64; 8] {
        let dofs = element_dofs(&self.mesh.elements()[e]);
        let mut ue = [0.0; 8];
        for (a, &d) in dofs.iter().enumerate() {
            ue[a] = u[d];
        }
        ue
    }

    fn strains(&self, u: &[f64]) -> Vec<SymTensor2> {
        let mut out = Vec::with_capacity(4 * self.mesh.n_elements());
        for e in 0..self.mesh.n_elements() {
            let ue = self.element_u(u, e);
            for (b, _) in &self.gauss[e] {
                out.push(plane_strain(element::engineering_strain(b, &ue)));
            }
        }
        out
    }

    /// Solves equilibrium for fixed Gauss-point states and prescribed values.
    fn solve_linear(&self, states: &[&MixtureState], prescribed: &BTreeMap<usize, f64>) -> Result<Vec<f64>> {
        let mut k = SkylineMatrix::new(self.first_row.clone());
        let mut rhs = vec![0.0; self.n_free];
        let mut u = vec![0.0; 2 * self.mesh.n_nodes()];
        for (&d, &v) in prescribed {
            u[d] = v;
        }
        for e in 0..self.mesh.n_elements() {
            let mut ke = [[0.0; 8]; 8];
            let mut fe = [0.0; 8];
            for (g, (b, w)) in self.gauss[e].iter().enumerate() {
                let eff = effective_elasticity(states[4 * e + g], &self.material.phases)?;
                element::add_btdb(&mut ke, b, &eff.stiffness.plane_strain_matrix(), *w);
                let sp = eff.stiffness.apply(&eff.plastic_strain);
                let sv = [sp.get(XX), sp.get(YY), sp.get(XY)];
                for a in 0..8 {
                    fe[a] += w * (b[0][a] * sv[0] + b[1][a] * sv[1] + b[2][a] * sv[2]);
                }
            }
            let dofs = element_dofs(&self.mesh.elements()[e]);
            for a in 0..8 {
                let Some(ea) = self.equation[dofs[a]] else { continue };
                rhs[ea] += fe[a];
                for c in 0..8 {
                    match self.equation[dofs[c]] {
                        Some(ec) if ea <= ec => k.add(ea, ec, ke[a][c]),
                        Some(_) => {}
                        None => rhs[ea] -= ke[a][c] * u[dofs[c]],
                    }
                }
            }
        }
        k.factor()?;
        k.solve(&mut rhs);
        for (d, eq) in self.equation.iter().enumerate() {
            if let Some(q) = eq {
                u[d] = rhs[*q];
            }
        }
        Ok(u)
    }

    /// `sum B^T sigma w det J` from the cached Gauss-point stresses.
    pub fn internal_forces(&self, state: &FemState) -> Vec<f64> {
        let mut f = vec![0.0; 2 * self.mesh.n_nodes()];
        for e in 0..self.mesh.n_elements() {
            let dofs = element_dofs(&self.mesh.elements()[e]);
            for (g, (b, w)) in self.gauss[e].iter().enumerate() {
                let s = &state.points[4 * e + g].stress;
                let sv = [s.get(XX), s.get(YY), s.get(XY)];
                for a in 0..8 {
                    f[dofs[a]] += w * (b[0][a] * sv[0] + b[1][a] * sv[1] + b[2][a] * sv[2]);
                }
            }
        }
        f
    }

    /// Sum of the internal force component over a node set, the reaction a
    /// support or loading plate exerts there.
    pub fn reaction(&self, state: &FemState, set: &str, component: usize) -> Result<f64> {
        let nodes = self
            .mesh
            .node_set(set)
            .ok_or_else(|| Error::InvalidMesh(alloc::format!("no node set named '{set}'")))?;
        let f = self.internal_forces(state);
        Ok(nodes.iter().map(|&n| f[2 * n + component]).sum())
    }

    fn attempt(
        &self,
        from: &FemState,
        prescribed: &BTreeMap<usize, f64>,
        reg: &RegularizationParams,
    ) -> Result<(FemState, usize, f64)> {
        let frozen: Vec<&MixtureState> = from.points.iter().map(|p| &p.state).collect();
        let mut u = self.solve_linear(&frozen, prescribed)?;
        let mut increment = f64::INFINITY;
        for pass in 1..=MAX_PASSES {
            let strains = self.strains(&u);
            let mut points = Vec::with_capacity(from.points.len());
            for (p, eps) in from.points.iter().zip(&strains) {
                let (state, report) = step(eps, &p.state, self.material, reg)?;
                points.push(GaussPointState {
                    state,
                    strain: *eps,
                    stress: report.stress,
                    dissipation: p.dissipation + report.dissipation_increment,
                });
            }
            let refs: Vec<&MixtureState> = points.iter().map(|p| &p.state).collect();
            let next = self.solve_linear(&refs, prescribed)?;
            let du: Vec<f64> = next.iter().zip(&u).map(|(a, b)| a - b).collect();
            let scale = norm(&next);
            increment = if scale > 0.0 { norm(&du) / scale } else { norm(&du) };
            u = next;
            if norm(&du) <= PASS_TOLERANCE * scale {
                let strains = self.strains(&u);
                for (p, eps) in points.iter_mut().zip(strains) {
                    p.stress = crate::energy::stress(&eps, &p.state, &self.material.phases)?;
                    p.strain = eps;
                }
                return Ok((FemState { u, points }, pass, increment));
            }
        }
        Err(Error::GlobalNotConverged { step: 0, increment })
    }

    /// Advances `state` by one step of `reg.dt` to the prescribed values in
    /// `bcs`, which must constrain the same dofs the solver was built with.
    pub fn solve_time_step(
        &self,
        state: &FemState,
        bcs: &BoundaryConditions,
        reg: &RegularizationParams,
    ) -> Result<(FemState, StepInfo)> {
        if !bcs.same_dofs(&self.prescribed) {
            return Err(Error::InvalidState("boundary conditions constrain different dofs".into()));
        }
        if state.u.len() != 2 * self.mesh.n_nodes() || state.points.len() != 4 * self.mesh.n_elements() {
            return Err(Error::InvalidState("state does not match the mesh".into()));
        }
        let mut last = Error::GlobalNotConverged { step: 0, increment: f64::INFINITY };
        for halvings in 0..=MAX_HALVINGS {
            let n_sub = 1usize << halvings;
            let sub_reg = reg.with_dt(reg.dt / n_sub as f64);
            let mut current = state.clone();
            let mut passes = 0;
            let mut increment = 0.0;
            let mut failed = None;
            for s in 1..=n_sub {
                let theta = s as f64 / n_sub as f64;
                let target: BTreeMap<usize, f64> = bcs
                    .values
                    .iter()
                    .map(|(&d, &v)| (d, state.u[d] + theta * (v - state.u[d])))
                    .collect();
                match self.attempt(&current, &target, &sub_reg) {
                    Ok((next, p, inc)) => {
                        current = next;
                        passes += p;
                        increment = inc;
                    }
                    Err(e @ Error::GlobalNotConverged { .. }) => {
                        failed = Some(e);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            match failed {
                None => {
                    let f = self.internal_forces(&current);
                    let (mut free, mut fixed) = (0.0, 0.0);
                    for (d, eq) in self.equation.iter().enumerate() {
                        if eq.is_some() {
                            free += f[d] * f[d];
                        } else {
                            fixed += f[d] * f[d];
                        }
                    }
                    let info = StepInfo {
                        passes,
                        substeps: n_sub,
                        increment,
                        residual: libm::sqrt(free),
                        reaction: libm::sqrt(fixed),
                    };
                    return Ok((current, info));
                }
                Some(e) => last = e,
            }
        }
        Err(last)
    }
}

/// Node-averaged quantities: element means of the Gauss values, averaged over
/// the elements incident to the node.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub node: usize,
    pub strain: SymTensor2,
    pub stress: SymTensor2,
    pub von_mises: f64,
    pub dissipation: f64,
    pub fractions: Vec<f64>,
    pub plastic_norms: Vec<f64>,
}

pub fn probe_node_average(mesh: &Mesh, state: &FemState, node: usize) -> Result<ProbeRecord> {
    if node >= mesh.n_nodes() {
        return Err(Error::InvalidMesh(alloc::format!("probe node {node} does not exist")));
    }
    let elements: Vec<usize> = (0..mesh.n_elements())
        .filter(|&e| mesh.elements()[e].contains(&node))
        .collect();
    if elements.is_empty() {
        return Err(Error::InvalidMesh(alloc::format!("probe node {node} is isolated")));
    }
    let k = state.points[0].state.k();
    let dim = state.points[0].strain.dim();
    let mut rec = ProbeRecord {
        node,
        strain: SymTensor2::zero(dim),
        stress: SymTensor2::zero(dim),
        von_mises: 0.0,
        dissipation: 0.0,
        fractions: vec![0.0; k],
        plastic_norms: vec![0.0; k],
    };
    let w = 1.0 / (4 * elements.len()) as f64;
    for &e in &elements {
        for g in 0..4 {
            let p = state.point(e, g);
            rec.strain += p.strain * w;
            rec.stress += p.stress * w;
            rec.von_mises += p.stress.von_mises() * w;
            rec.dissipation += p.dissipation * w;
            for i in 0..k {
                rec.fractions[i] += p.state.fraction(i) * w;
                rec.plastic_norms[i] += p.state.plastic(i).norm() * w;
            }
        }
    }
    Ok(rec)
}

/// Element means of the Gauss-point fractions, `[element][phase]`.
pub fn element_fractions(state: &FemState) -> Vec<Vec<f64>> {
    state
        .points
        .chunks(4)
        .map(|c| {
            let k = c[0].state.k();
            (0..k).map(|i| c.iter().map(|p| p.state.fraction(i)).sum::<f64>() / 4.0).collect()
        })
        .collect()
}

/// Element means of the Gauss-point von Mises stress.
pub fn element_von_mises(state: &FemState) -> Vec<f64> {
    state
        .points
        .chunks(4)
        .map(|c| c.iter().map(|p| p.stress.von_mises()).sum::<f64>() / 4.0)
        .collect()
}

/// Area-weighted domain average of the phase fractions.
pub fn domain_fractions(solver: &FemSolver, state: &FemState) -> Vec<f64> {
    let k = state.points[0].state.k();
    let mut acc = vec![0.0; k];
    let mut area = 0.0;
    for (p, w) in state.points.iter().zip(solver.weights()) {
        area += w;
        for (i, a) in acc.iter_mut().enumerate() {
            *a += w * p.state.fraction(i);
        }
    }
    acc.iter().map(|a| a / area).collect()
}

/// Compression of the plate: `u_x = 0` on `left`, `u_y = 0` on `bottom` and
/// `u_x = -amplitude t/T` on `load`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSettings {
    pub n_steps: usize,
    pub ramp_amplitude: f64,
    pub probe_node: usize,
    pub left: String,
    pub bottom: String,
    pub load: String,
    pub hole: String,
}

impl BenchmarkSettings {
    pub fn new(n_steps: usize, ramp_amplitude: f64, probe_node: usize) -> Self {
        BenchmarkSettings {
            n_steps,
            ramp_amplitude,
            probe_node,
            left: "left".into(),
            bottom: "bottom".into(),
            load: "load".into(),
            hole: "hole".into(),
        }
    }

    pub fn boundary_conditions(&self, mesh: &Mesh, step: usize) -> Result<BoundaryConditions> {
        let mut bcs = BoundaryConditions::new();
        bcs.prescribe_set(mesh, &self.left, 0, 0.0)?;
        bcs.prescribe_set(mesh, &self.bottom, 1, 0.0)?;
        let d = -self.ramp_amplitude * step as f64 / self.n_steps as f64;
        bcs.prescribe_set(mesh, &self.load, 0, d)?;
        Ok(bcs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkStep {
    pub step: usize,
    pub t: f64,
    pub probe: ProbeRecord,
    pub domain_fractions: Vec<f64>,
    /// Reaction on the loaded edge in `x`, per unit thickness.
    pub load_reaction: f64,
    pub info: Option<StepInfo>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub steps: Vec<BenchmarkStep>,
    /// First step at which any element mean of the initially dominant phase
    /// left 1, with those elements.
    pub first_transformed: Option<(usize, Vec<usize>)>,
    /// Elements touching the hole boundary.
    pub hole_elements: Vec<usize>,
}

/// Runs the ramp. `observe` sees every step, including step 0, and may stop
/// the run by returning an error.
pub fn run_benchmark<F>(
    mesh: &Mesh,
    material: &Material,
    reg: &RegularizationParams,
    initial: &MixtureState,
    settings: &BenchmarkSettings,
    mut observe: F,
) -> Result<BenchmarkResult>
where
    F: FnMut(&FemState, &BenchmarkStep) -> Result<()>,
{
    if settings.n_steps == 0 {
        return Err(Error::InvalidParameter { name: "n_steps", value: 0.0 });
    }
    if !(settings.ramp_amplitude >= 0.0) || !settings.ramp_amplitude.is_finite() {
        return Err(Error::InvalidParameter {
            name: "ramp_amplitude",
            value: settings.ramp_amplitude,
        });
    }
    let parent = (0..initial.k())
        .max_by(|&a, &b| initial.fraction(a).total_cmp(&initial.fraction(b)).then(b.cmp(&a)))
        .unwrap_or(0);
    let parent_fraction = initial.fraction(parent);
    let solver = FemSolver::new(mesh, material, &settings.boundary_conditions(mesh, 0)?)?;
    let mut state = FemState::uniform(mesh, initial, material)?;
    let record = |n: usize, state: &FemState, info: Option<StepInfo>| -> Result<BenchmarkStep> {
        Ok(BenchmarkStep {
            step: n,
            t: n as f64 * reg.dt,
            probe: probe_node_average(mesh, state, settings.probe_node)?,
            domain_fractions: domain_fractions(&solver, state),
            load_reaction: solver.reaction(state, &settings.load, 0)?,
            info,
        })
    };
    let mut result = BenchmarkResult {
        steps: Vec::with_capacity(settings.n_steps + 1),
        first_transformed: None,
        hole_elements: mesh.elements_touching(&settings.hole),
    };
    let s0 = record(0, &state, None)?;
    observe(&state, &s0)?;
    result.steps.push(s0);
    for n in 1..=settings.n_steps {
        let bcs = settings.boundary_conditions(mesh, n)?;
        let (next, info) = solver.solve_time_step(&state, &bcs, reg).map_err(|e| match e {
            Error::GlobalNotConverged { increment, .. } => Error::GlobalNotConverged { step: n, increment },
            e => Error::StepFailed { step: n, source: alloc::boxed::Box::new(e) },
        })?;
        state = next;
        if result.first_transformed.is_none() {
            let changed: Vec<usize> = element_fractions(&state)
                .iter()
                .enumerate()
                .filter(|(_, f)| f[parent] < parent_fraction)
                .map(|(e, _)| e)
                .collect();
            if !changed.is_empty() {
                result.first_transformed = Some((n, changed));
            }
        }
        let s = record(n, &state, Some(info))?;
        observe(&state, &s)?;
        result.steps.push(s);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::ModelOptions;
    use crate::phase::{PhaseParams, TransitionParams};
    use crate::tensor::Dim;

    fn elastic_material() -> Material {
        Material::new(
            vec![PhaseParams::isotropic(100.0, 0.3, Dim::Two, 0.0, 1e9, 1.0).unwrap()],
            TransitionParams::uniform(1, 0.0).unwrap(),
            ModelOptions::for_stress_scale(100.0),
        )
        .unwrap()
    }

    #[test]
    fn zero_load_gives_zero_solution() {
        let mesh = Mesh::rectangle(1.0, 1.0, 3, 3).unwrap();
        let m = elastic_material();
        let reg = RegularizationParams::new(1.0, 1.0, 1.0).unwrap();
        let mut bcs = BoundaryConditions::new();
        bcs.prescribe_set(&mesh, "left", 0, 0.0).unwrap();
        bcs.prescribe_set(&mesh, "bottom", 1, 0.0).unwrap();
        let solver = FemSolver::new(&mesh, &m, &bcs).unwrap();
        let s0 = FemState::uniform(&mesh, &MixtureState::pure(Dim::Two, 1, 0), &m).unwrap();
        let (s1, info) = solver.solve_time_step(&s0, &bcs, &reg).unwrap();
        assert_eq!(s1, s0);
        assert_eq!(info.passes, 1);
    }

    #[test]
    fn insufficient_supports_are_singular() {
        let mesh = Mesh::rectangle(1.0, 1.0, 2, 2).unwrap();
        let m = elastic_material();
        let reg = RegularizationParams::new(1.0, 1.0, 1.0).unwrap();
        let mut bcs = BoundaryConditions::new();
        bcs.prescribe_set(&mesh, "left", 0, 0.0).unwrap();
        let solver = FemSolver::new(&mesh, &m, &bcs).unwrap();
        let s0 = FemState::uniform(&mesh, &MixtureState::pure(Dim::Two, 1, 0), &m).unwrap();
        assert!(matches!(
            solver.solve_time_step(&s0, &bcs, &reg),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn conflicting_prescription_rejected() {
        let mesh = Mesh::rectangle(1.0, 1.0, 1, 1).unwrap();
        let mut bcs = BoundaryConditions::new();
        bcs.prescribe_set(&mesh, "left", 0, 0.0).unwrap();
        bcs.prescribe_set(&mesh, "bottom", 0, 0.0).unwrap();
        assert!(bcs.prescribe_set(&mesh, "bottom", 0, 1.0).is_err());
    }

    #[test]
    fn uniaxial_strain_patch() {
        // u_x = -0.01 x with u_y = 0 everywhere: uniaxial plane strain
        let mesh = Mesh::rectangle(2.0, 1.0, 3, 2).unwrap();
        let m = elastic_material();
        let reg = RegularizationParams::new(1.0, 1.0, 1.0).unwrap();
        let mut bcs = BoundaryConditions::new();
        for (n, x) in mesh.nodes().iter().enumerate() {
            bcs.prescribe(n, 1, 0.0).unwrap();
            if x[0] == 0.0 || x[0] == 2.0 {
                bcs.prescribe(n, 0, -0.01 * x[0]).unwrap();
            }
        }
        let solver = FemSolver::new(&mesh, &m, &bcs).unwrap();
        let s0 = FemState::uniform(&mesh, &MixtureState::pure(Dim::Two, 1, 0), &m).unwrap();
        let (s1, info) = solver.solve_time_step(&s0, &bcs, &reg).unwrap();
        let exact = m.phases[0].stiffness().apply(&SymTensor2::plane(-0.01, 0.0, 0.0));
        for p in &s1.points {
            assert!((p.stress - exact).norm() <= 1e-10 * exact.norm());
        }
        assert!(info.residual <= 1e-10 * info.reaction);
        let probe = probe_node_average(&mesh, &s1, 5).unwrap();
        assert!((probe.stress - exact).norm() <= 1e-10 * exact.norm());
    }

    #[test]
    fn probe_errors() {
        let mut mesh = Mesh::rectangle(1.0, 1.0, 1, 1).unwrap();
        let m = elastic_material();
        let s = FemState::uniform(&mesh, &MixtureState::pure(Dim::Two, 1, 0), &m).unwrap();
        assert!(probe_node_average(&mesh, &s, 4).is_err());
        let mut nodes = mesh.nodes().to_vec();
        nodes.push([5.0, 5.0]);
        mesh = Mesh::new(nodes, mesh.elements().to_vec(), BTreeMap::new()).unwrap();
        assert!(probe_node_average(&mesh, &s, 4).is_err());
    }
}
