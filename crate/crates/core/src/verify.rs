//! Batch verification suites and their report.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, Generator, MultiIndex};
use crate::central::CentralFactor;
use crate::chart::ChartPoint;
use crate::connection::{
    check_metric_compatibility, check_torsion_free, closed_form_connection, projector_connection, solve_connection,
    ConnectionTable,
};
use crate::curvature::{closed_form_tensor, gcb_integrand, CurvatureTensor};
use crate::derivations::{apply_to_relation, defining_relations, relation_element, Derivation, DerivationBasis};
use crate::geometry::{ambient_h, base_metric_entry, e_vector, embed, Ambient5, Metric, Perturbation, Projector};
use crate::json::SCHEMA;
use crate::localization::LocalElement;
use crate::scalar::{rat, rational_to_f64, GaussianRational, QScalar};
use crate::trace::{euler_characteristic, quadrature_oracle, tau, tau_basis_coefficient, tau_delta, TraceValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Algebra,
    Derivations,
    Module,
    Connection,
    Curvature,
    Trace,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 6] =
        [Suite::Algebra, Suite::Derivations, Suite::Module, Suite::Connection, Suite::Curvature, Suite::Trace];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Derivations => "derivations",
            Suite::Module => "module",
            Suite::Connection => "connection",
            Suite::Curvature => "curvature",
            Suite::Trace => "trace",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{}'", s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub reference: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(id: &str, reference: &str, outcome: Result<String, String>) -> Self {
        let (status, detail) = match outcome {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        Self { id: id.to_string(), reference: reference.to_string(), status, detail }
    }

    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "reference": self.reference, "status": self.status.to_string(), "detail": self.detail})
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "exit_code": self.exit_code(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {} ({})", c.id, c.status, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Inputs shared by all checks of a run.
pub struct Context {
    pub perturbation: Perturbation,
    pub seed: u64,
    pub tolerance: f64,
    metric: OnceLock<Result<Metric, String>>,
    solved: OnceLock<Result<ConnectionTable, String>>,
}

impl Context {
    pub fn new(perturbation: Perturbation, seed: u64, tolerance: f64) -> Self {
        Self { perturbation, seed, tolerance, metric: OnceLock::new(), solved: OnceLock::new() }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
    }

    fn metric(&self) -> Result<&Metric, String> {
        self.metric
            .get_or_init(|| Metric::new(self.perturbation.clone()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn solved(&self) -> Result<&ConnectionTable, String> {
        self.solved
            .get_or_init(|| self.metric().map(solve_connection))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn is_identity(&self) -> bool {
        self.perturbation.delta() == &LocalElement::one()
    }

    fn polynomial_delta(&self) -> bool {
        self.perturbation.delta().as_algebra().is_some()
    }
}

/// A random element with `terms` basis terms of degree at most `max_degree`
/// and small Gaussian-rational Laurent coefficients.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, terms: usize) -> AlgebraElement {
    let basis = MultiIndex::up_to_degree(max_degree);
    let mut out = AlgebraElement::zero();
    for _ in 0..terms {
        let idx = basis[rng.random_range(0..basis.len())];
        let g = GaussianRational::new(
            BigRational::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=4).into()),
            BigRational::new(rng.random_range(-3i64..=3).into(), rng.random_range(1i64..=3).into()),
        );
        out.add_term(idx, &QScalar::monomial(g, rng.random_range(-2..=2)));
    }
    out
}

/// `(rank, dimension)` of multiplication by `f` on elements of degree `≤ max_degree`.
pub fn multiplication_rank(f: CentralFactor, max_degree: u32) -> (usize, usize) {
    let columns = MultiIndex::up_to_degree(max_degree);
    let fe = f.element();
    let mut pivots: BTreeMap<MultiIndex, BTreeMap<MultiIndex, BigRational>> = BTreeMap::new();
    for idx in &columns {
        let image = &fe * &AlgebraElement::basis(*idx);
        let mut v: BTreeMap<MultiIndex, BigRational> = image
            .terms()
            .map(|(k, c)| (*k, c.as_rational().expect("central factors act with rational coefficients")))
            .collect();
        while let Some((&lead, c)) = v.iter().next_back() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, v);
                break;
            };
            let factor = c / &p[&lead];
            for (k, pc) in p {
                let slot = v.entry(*k).or_insert_with(BigRational::zero);
                *slot -= &factor * pc;
                if slot.is_zero() {
                    v.remove(k);
                }
            }
        }
    }
    (pivots.len(), columns.len())
}

type CheckFn = fn(&Context) -> Result<String, String>;

fn ensure(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> Result<String, String> {
    if ok {
        Ok(pass.into())
    } else {
        Err(fail.into())
    }
}

fn algebra_relations(_: &Context) -> Result<String, String> {
    for (name, r) in defining_relations() {
        let value = relation_element(&r);
        if !value.is_zero() {
            return Err(format!("{} evaluates to {}", name, value));
        }
    }
    Ok("7 relations reduce to 0".into())
}

fn algebra_associativity(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(1);
    for n in 0..50 {
        let a = random_element(&mut rng, 3, 3);
        let b = random_element(&mut rng, 3, 3);
        let c = random_element(&mut rng, 3, 3);
        if &(&a * &b) * &c != &a * &(&b * &c) {
            return Err(format!("triple {} is not associative", n));
        }
    }
    Ok("50 random triples".into())
}

fn algebra_star(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(2);
    for n in 0..50 {
        let a = random_element(&mut rng, 4, 4);
        let b = random_element(&mut rng, 4, 4);
        if (&a * &b).star() != &b.star() * &a.star() || a.star().star() != a {
            return Err(format!("pair {} breaks the adjoint rules", n));
        }
    }
    Ok("(ab)* = b*a* and a** = a on 50 random pairs".into())
}

fn algebra_center(_: &Context) -> Result<String, String> {
    let gens: Vec<AlgebraElement> = Generator::ALL.iter().map(|g| AlgebraElement::generator(*g)).collect();
    let basis = MultiIndex::up_to_degree(4);
    for idx in &basis {
        let e = AlgebraElement::basis(*idx);
        let commutes = gens.iter().all(|g| e.commutator(g).is_zero());
        if commutes != idx.is_central() {
            return Err(format!("e^{} misclassified", idx));
        }
    }
    Ok(format!("{} basis elements classified", basis.len()))
}

fn algebra_regularity(_: &Context) -> Result<String, String> {
    let mut parts = Vec::new();
    for f in CentralFactor::ALL {
        let (rank, dim) = multiplication_rank(f, 6);
        if rank != dim {
            return Err(format!("{}: rank {} < {}", f.name(), rank, dim));
        }
        parts.push(format!("{} rank {}", f.name(), rank));
    }
    Ok(parts.join(", "))
}

fn tower(max_n: u32) -> Vec<DerivationBasis> {
    let mut out = vec![DerivationBasis::D4];
    for n in 0..=max_n {
        out.extend([DerivationBasis::D1(n), DerivationBasis::D2(n), DerivationBasis::D3(n)]);
    }
    out
}

fn derivations_relations(_: &Context) -> Result<String, String> {
    let relations = defining_relations();
    let basis = tower(3);
    for b in &basis {
        let d = Derivation::basis(*b);
        for (name, r) in &relations {
            let value = apply_to_relation(&d, r);
            if !value.is_zero() {
                return Err(format!("{} maps {} to {}", b, name, value));
            }
        }
    }
    Ok(format!("{} derivations x 7 relations", basis.len()))
}

fn derivations_leibniz(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(3);
    let basis = tower(1);
    for n in 0..30 {
        let a = random_element(&mut rng, 3, 3);
        let b = random_element(&mut rng, 3, 3);
        for db in &basis {
            let d = Derivation::basis(*db);
            if d.apply(&(&a * &b)) != &(&d.apply(&a) * &b) + &(&a * &d.apply(&b)) {
                return Err(format!("{} on pair {}", db, n));
            }
        }
    }
    Ok("30 random pairs".into())
}

fn derivations_star(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(4);
    for n in 0..50 {
        let a = random_element(&mut rng, 4, 4);
        for i in 1..=4 {
            let d = Derivation::partial(i);
            if d.apply(&a.star()) != d.apply(&a).star() {
                return Err(format!("d{} on element {}", i, n));
            }
        }
    }
    Ok("d(a*) = d(a)* on 50 random elements".into())
}

fn derivations_brackets(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(5);
    let basis = tower(2);
    let samples: Vec<AlgebraElement> = (0..4).map(|_| random_element(&mut rng, 3, 4)).collect();
    for x in &basis {
        for y in &basis {
            let dx = Derivation::basis(*x);
            let dy = Derivation::basis(*y);
            let br = dx.bracket(&dy);
            for a in &samples {
                let lhs = &dx.apply(&dy.apply(a)) - &dy.apply(&dx.apply(a));
                if lhs != br.apply(a) {
                    return Err(format!("[{}, {}]", x, y));
                }
            }
        }
    }
    Ok(format!("{} pairs", basis.len() * basis.len()))
}

fn derivations_words(_: &Context) -> Result<String, String> {
    let mut words: Vec<Vec<Generator>> = vec![vec![]];
    let mut count = 0;
    for _ in 0..3 {
        words = words
            .iter()
            .flat_map(|w| Generator::ALL.iter().map(move |g| [w.as_slice(), &[*g]].concat()))
            .collect();
        for w in &words {
            let product = w.iter().fold(AlgebraElement::one(), |acc, g| &acc * &AlgebraElement::generator(*g));
            for i in 1..=4 {
                let d = Derivation::partial(i);
                if d.apply_word(w) != d.apply(&product) {
                    return Err(format!("d{} on word {:?}", i, w));
                }
            }
            count += 1;
        }
    }
    Ok(format!("{} words, Leibniz expansion = closed form", count))
}

fn projector_idempotent(_: &Context) -> Result<String, String> {
    let p = Projector::new();
    for i in 1..=5 {
        let once = p.apply(&Ambient5::unit(i));
        if p.apply(&once).sub(&once).is_zero() {
            continue;
        }
        return Err(format!("P^2 != P on e_{}", i));
    }
    Ok("P^2 = P".into())
}

fn projector_image(_: &Context) -> Result<String, String> {
    let p = Projector::new();
    for i in 1..=5 {
        if !embed(&Projector::image_of_unit(i)).sub(&p.apply(&Ambient5::unit(i))).is_zero() {
            return Err(format!("P(e_{}) differs from its expansion", i));
        }
    }
    for a in 1..=4 {
        if !p.apply(&e_vector(a)).sub(&e_vector(a)).is_zero() {
            return Err(format!("P(E_{}) != E_{}", a, a));
        }
    }
    Ok("P(e_i) expansions and P(E_a) = E_a".into())
}

fn metric_diagonal(_: &Context) -> Result<String, String> {
    for a in 1..=4 {
        for b in 1..=4 {
            let h = ambient_h(&e_vector(a), &e_vector(b));
            let expected = if a == b { base_metric_entry(a) } else { LocalElement::zero() };
            if h != expected {
                return Err(format!("h(E_{}, E_{}) = {}", a, b, h));
            }
        }
    }
    Ok("h(E_a, E_b) diagonal".into())
}

fn metric_inverse(ctx: &Context) -> Result<String, String> {
    let h = ctx.metric()?;
    for a in 1..=4 {
        if h.entry(a).mul(h.inverse_entry(a)) != LocalElement::one() {
            return Err(format!("h_{0}{0} h^{0}{0} != 1", a));
        }
    }
    Ok("h_aa h^aa = 1".into())
}

fn levi_civita_unique(ctx: &Context) -> Result<String, String> {
    let solved = ctx.solved()?;
    let closed = closed_form_connection(&ctx.perturbation, None);
    match solved.first_difference(&closed) {
        None => Ok("Koszul = closed form".into()),
        Some((a, b)) => Err(format!("entry ({}, {}) differs", a, b)),
    }
}

fn metric_compatible(ctx: &Context) -> Result<String, String> {
    ensure(check_metric_compatibility(ctx.solved()?, ctx.metric()?), "all defects vanish", "nonzero defect")
}

fn torsion_free(ctx: &Context) -> Result<String, String> {
    ensure(check_torsion_free(ctx.solved()?), "all torsion pairs vanish", "nonzero torsion")
}

fn projector_coincide(ctx: &Context) -> Result<String, String> {
    let p = Projector::new();
    let table = ctx.solved()?;
    for a in 1..=4 {
        for b in 1..=4 {
            let bar = projector_connection(&p, &Derivation::partial(a), &e_vector(b));
            let bar = p.to_basis(&bar).map_err(|e| e.to_string())?;
            if &bar != table.entry(a, b) {
                return Err(format!("pair ({}, {})", a, b));
            }
        }
    }
    Ok("16 pairs agree".into())
}

fn curvature(ctx: &Context) -> Result<CurvatureTensor, String> {
    Ok(CurvatureTensor::compute(ctx.solved()?, ctx.metric()?))
}

fn curvature_table(ctx: &Context) -> Result<String, String> {
    let ct = curvature(ctx)?;
    let expected = closed_form_tensor(&ctx.perturbation);
    for (k, v) in ct.nonzero() {
        if expected.get(k) != Some(v) {
            return Err(format!("R{:?} = {}", k, v));
        }
    }
    for (k, v) in &expected {
        if &ct.component(k.0, k.1, k.2, k.3) != v {
            return Err(format!("R{:?} missing", k));
        }
    }
    Ok(format!("{} nonzero components match", expected.len()))
}

fn gcb_identity(ctx: &Context) -> Result<String, String> {
    let ct = curvature(ctx)?;
    gcb_integrand(&ct, &ctx.perturbation).map(|x| x.to_string()).map_err(|e| e.to_string())
}

fn classical_limit(ctx: &Context) -> Result<String, String> {
    let ct = curvature(ctx)?;
    let mut rng = ctx.rng(6);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let pt = ChartPoint::random(&mut rng);
        let (riem, ric, s) = ct.classical_invariants(&pt, Complex64::new(1.0, 0.0)).ok_or("formal delta")?;
        worst = worst.max((riem - 24.0).abs()).max((ric - 36.0).abs()).max((s * s - 144.0).abs());
    }
    ensure(worst < 1e-9, format!("20 points, max deviation {:.1e}", worst), format!("deviation {:.3e}", worst))
}

fn trace_noncentral(ctx: &Context) -> Result<String, String> {
    let basis = MultiIndex::up_to_degree(4);
    for idx in basis.iter().filter(|i| !i.is_central()) {
        let v = tau_delta(&AlgebraElement::basis(*idx), &ctx.perturbation).map_err(|e| e.to_string())?;
        if !v.is_zero() {
            return Err(format!("tau(e^{}) = {}", idx, v));
        }
    }
    Ok("all non-central basis elements of degree <= 4".into())
}

fn trace_commutator(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(7);
    for n in 0..200 {
        let a = random_element(&mut rng, 4, 3);
        let b = random_element(&mut rng, 4, 3);
        let v = tau_delta(&a.commutator(&b), &ctx.perturbation).map_err(|e| e.to_string())?;
        if !v.is_zero() {
            return Err(format!("pair {}: {}", n, v));
        }
    }
    Ok("200 random pairs".into())
}

fn trace_reality(ctx: &Context) -> Result<String, String> {
    let mut rng = ctx.rng(8);
    for n in 0..200 {
        let a = random_element(&mut rng, 4, 4);
        let lhs = tau_delta(&a.star(), &ctx.perturbation).map_err(|e| e.to_string())?;
        let rhs = tau_delta(&a, &ctx.perturbation).map_err(|e| e.to_string())?.conj();
        if lhs != rhs {
            return Err(format!("element {}", n));
        }
    }
    Ok("200 random elements".into())
}

fn trace_normalization(_: &Context) -> Result<String, String> {
    let sum = tau(&AlgebraElement::abs_z2()).add(&tau(&AlgebraElement::abs_w2())).add(&tau(&AlgebraElement::t().pow(2)));
    let one = tau(&AlgebraElement::one());
    ensure(sum == one, format!("sum = {}", one), format!("{} != {}", sum, one))
}

fn trace_closed_form(ctx: &Context) -> Result<String, String> {
    let id = Perturbation::identity();
    let pairs: Vec<(u32, u32)> = (0..=4).flat_map(|j| (0..=4 - j).map(move |l| (j, l))).collect();
    let deviations: Result<Vec<f64>, String> = pairs
        .par_iter()
        .map(|&(j, l)| {
            let e = LocalElement::from_algebra(AlgebraElement::basis(MultiIndex::new(j, j, l, l, 0)));
            let numeric = quadrature_oracle(&e, &id, ctx.tolerance / 10.0).map_err(|e| e.to_string())?;
            Ok((rational_to_f64(&tau_basis_coefficient(j, l)) * PI * PI - numeric).abs())
        })
        .collect();
    let worst = deviations?.into_iter().fold(0.0, f64::max);
    let volume = tau(&AlgebraElement::one()) == TraceValue::pi2(QScalar::from_rational(BigRational::new(8.into(), 3.into())));
    ensure(
        worst < ctx.tolerance && volume,
        format!("{} elements, max deviation {:.1e}; tau(1) = 8/3 pi^2", pairs.len(), worst),
        format!("max deviation {:.3e}, volume ok: {}", worst, volume),
    )
}

fn euler(ctx: &Context) -> Result<String, String> {
    let e = euler_characteristic(&ctx.perturbation).map_err(|e| e.to_string())?;
    ensure(e.chi == rat(2), format!("chi = {}", e.chi), format!("chi = {}", e.chi))
}

fn checks_for(suite: Suite, ctx: &Context) -> Vec<(&'static str, &'static str, CheckFn)> {
    let mut out: Vec<(&'static str, &'static str, CheckFn)> = Vec::new();
    match suite {
        Suite::Algebra => {
            out.push(("algebra-relations", "defining relations", algebra_relations));
            out.push(("algebra-associativity", "basis product", algebra_associativity));
            out.push(("algebra-adjoint", "adjoint", algebra_star));
            out.push(("algebra-center", "center", algebra_center));
            out.push(("algebra-regularity", "regular central elements", algebra_regularity));
        }
        Suite::Derivations => {
            out.push(("derivations-relations", "derivations", derivations_relations));
            out.push(("derivations-leibniz", "derivations", derivations_leibniz));
            out.push(("derivations-real", "hermitian derivations", derivations_star));
            out.push(("derivations-brackets", "structure constants", derivations_brackets));
            out.push(("derivations-words", "action on basis elements", derivations_words));
        }
        Suite::Module => {
            out.push(("projector-idempotent", "projector", projector_idempotent));
            out.push(("projector-image", "projector", projector_image));
            out.push(("metric-diagonal", "metric", metric_diagonal));
            out.push(("metric-inverse", "metric", metric_inverse));
        }
        Suite::Connection => {
            out.push(("levi-civita-unique", "Levi-Civita connection", levi_civita_unique));
            out.push(("metric-compatible", "Levi-Civita connection", metric_compatible));
            out.push(("torsion-free", "Levi-Civita connection", torsion_free));
            if ctx.is_identity() {
                out.push(("projector-coincide", "projector connection", projector_coincide));
            }
        }
        Suite::Curvature => {
            out.push(("curvature-table", "curvature components", curvature_table));
            out.push(("gcb-integrand", "Gauss-Chern-Bonnet integrand", gcb_identity));
            if ctx.is_identity() {
                out.push(("classical-limit", "round 4-sphere", classical_limit));
            }
        }
        Suite::Trace => {
            if ctx.polynomial_delta() {
                out.push(("trace-noncentral", "trace", trace_noncentral));
                out.push(("trace-commutator", "trace property", trace_commutator));
                out.push(("trace-reality", "trace property", trace_reality));
            }
            out.push(("trace-normalization", "trace", trace_normalization));
            out.push(("trace-closed-form", "trace", trace_closed_form));
            out.push(("euler-characteristic", "Gauss-Chern-Bonnet theorem", euler));
        }
        Suite::All => {
            for s in Suite::SINGLE {
                out.extend(checks_for(s, ctx));
            }
        }
    }
    out
}

/// Run a suite; checks run in parallel and are reported in a fixed order.
pub fn run_suite(suite: Suite, ctx: &Context) -> VerificationReport {
    let jobs = checks_for(suite, ctx);
    let checks = jobs.par_iter().map(|(id, reference, f)| Check::new(id, reference, f(ctx))).collect();
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_ranks() {
        for f in CentralFactor::ALL {
            let (rank, dim) = multiplication_rank(f, 4);
            assert_eq!(rank, dim);
        }
    }

    #[test]
    fn degree_zero_truncation() {
        let (rank, dim) = multiplication_rank(CentralFactor::AbsZ2, 0);
        assert_eq!((rank, dim), (2, 2));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::SINGLE.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn connection_suite_identity() {
        let ctx = Context::new(Perturbation::identity(), 0, 1e-8);
        let report = run_suite(Suite::Connection, &ctx);
        let lc = report.find("levi-civita-unique").unwrap();
        assert_eq!((lc.status, lc.detail.as_str()), (Status::Pass, "Koszul = closed form"));
        assert!(report.passed(), "{}", report);
        assert_eq!(report.checks.len(), 4);
    }

    #[test]
    fn failing_euler_sets_exit_code() {
        let ctx = Context::new(Perturbation::explicit(rat(1), 1, 0).unwrap(), 0, 1e-8);
        let report = run_suite(Suite::Trace, &ctx);
        assert_eq!(report.find("euler-characteristic").unwrap().status, Status::Fail);
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn random_elements_are_seeded() {
        let a = random_element(&mut ChaCha8Rng::seed_from_u64(5), 4, 4);
        let b = random_element(&mut ChaCha8Rng::seed_from_u64(5), 4, 4);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }
}
