//! Property suites: every invariant of the block algebra and of the
//! structure-constant oracle, run over a configurable set of sources and
//! collected into one [`Report`] per suite.
//!
//! Thresholds are stated for the default tolerance `1e-10` and scale
//! linearly with [`SuiteConfig::tolerance`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::{check_norm_inequalities, cstar_norm, inner_product, l2_norm, operator_norm, truncation_tail};
use crate::conv::{
    act, approximate_unit, check_approximate_unit, convolve, counit_star, from_representation, intertwiner_space,
    represent, star, Multiplicities,
};
use crate::group::{
    build_function_hopf, builtin_group, comodule_of_irrep, fourier, group_convolution,
    group_decomposition, instance_from_group, inverse_fourier, left_convolution_matrix, random_function,
    validate_irreps, GroupError, GroupTable, IrrepSet,
};
use crate::linalg::CMatrix;
use crate::model::{
    load_instance, project, random_complex, random_element, random_window, save_instance, validate_instance,
    BlockLabel, ConvElement, Filtration, InstanceSpec, ModuleVector, TruncationWindow,
};
use crate::oracle::{
    co_inner_residual, comodule_hom_space, compute_integral, validate_hopf, ComodulePresentation, HopfOracle,
    HopfPresentation, WindowProjector,
};
use crate::report::Report;
use crate::scalar::{c, max_abs, max_abs_diff, C};
use crate::synthetic::synthetic_instances;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Number of random multiplicity patterns in the intertwiner checks.
const INTERTWINER_PATTERNS: usize = 20;
/// Cap on pairs for the dual coproduct multiplicativity check.
const DUAL_PAIRS: usize = 200;
/// Cap on elements pushed through the approximate-unit filtration.
const UNIT_SAMPLES: usize = 50;

type Failure = Box<dyn std::error::Error>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Core,
    Oracle,
    Norms,
    Hopf,
    All,
}

impl Suite {
    pub const COMPONENTS: [Suite; 4] = [Suite::Core, Suite::Oracle, Suite::Norms, Suite::Hopf];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Oracle => "oracle",
            Suite::Norms => "norms",
            Suite::Hopf => "hopf",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?} (expected core, oracle, norms, hopf or all)")]
    UnknownSuite(String),
    #[error("tolerance must be a positive finite number, got {0}")]
    Tolerance(f64),
    #[error("samples must be at least 1")]
    Samples,
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::Core, Suite::Oracle, Suite::Norms, Suite::Hopf, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_owned()))
    }
}

/// A finite group with a complete irrep set, under a display name.
#[derive(Clone, Debug)]
pub struct NamedGroup {
    pub name: String,
    pub table: GroupTable,
    pub irreps: IrrepSet<f64>,
}

impl NamedGroup {
    pub fn builtin(name: &str) -> Result<Self, GroupError> {
        let (table, irreps) = builtin_group(name)?;
        Ok(NamedGroup {
            name: name.to_owned(),
            table,
            irreps,
        })
    }
}

#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: String,
    pub spec: InstanceSpec<f64>,
}

#[derive(Clone, Debug)]
pub struct NamedHopf {
    pub name: String,
    pub presentation: HopfPresentation<f64>,
}

/// Seed, sample count, tolerance and the sources every suite runs over.
/// The synthetic q-instances are included unless `synthetic` is cleared.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub groups: Vec<NamedGroup>,
    pub instances: Vec<NamedInstance>,
    pub hopfs: Vec<NamedHopf>,
    pub synthetic: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, samples: usize, tolerance: f64) -> Result<Self, SuiteError> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(SuiteError::Tolerance(tolerance));
        }
        if samples == 0 {
            return Err(SuiteError::Samples);
        }
        Ok(SuiteConfig {
            seed,
            samples,
            tolerance,
            groups: Vec::new(),
            instances: Vec::new(),
            hopfs: Vec::new(),
            synthetic: true,
        })
    }

    /// Adds built-in groups by name.
    pub fn with_builtin_groups(mut self, names: &[&str]) -> Result<Self, SuiteError> {
        for name in names {
            self.groups.push(NamedGroup::builtin(name)?);
        }
        Ok(self)
    }

    /// A threshold stated for the default tolerance, rescaled.
    pub fn threshold(&self, base: f64) -> f64 {
        base * self.tolerance / DEFAULT_TOLERANCE
    }

    /// Independent, reproducible stream for one named check.
    fn rng(&self, tag: &str) -> ChaCha8Rng {
        // FNV-1a keeps the stream stable across platforms and releases.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in tag.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(h ^ self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    /// Block instances for the core and norm suites: synthetic ones, one
    /// per group, then user-supplied ones.
    fn block_instances(&self) -> Vec<NamedInstance> {
        let mut out = Vec::new();
        if self.synthetic {
            out.extend(
                synthetic_instances::<f64>()
                    .into_iter()
                    .map(|(name, spec)| NamedInstance { name, spec }),
            );
        }
        for g in &self.groups {
            if let Ok(spec) = instance_from_group(&g.table, &g.irreps) {
                out.push(NamedInstance {
                    name: g.name.clone(),
                    spec,
                });
            }
        }
        out.extend(self.instances.iter().cloned());
        out
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Report {
    let mut report = Report::new(format!("suite {suite}"));
    match suite {
        Suite::Core => core_suite(config, &mut report),
        Suite::Oracle => oracle_suite(config, &mut report),
        Suite::Norms => norms_suite(config, &mut report),
        Suite::Hopf => hopf_suite(config, &mut report),
        Suite::All => {
            for s in Suite::COMPONENTS {
                report.absorb(&format!("{s}/"), run_suite(s, config));
            }
        }
    }
    report
}

fn guarded(report: &mut Report, scope: &str, r: Result<(), Failure>) {
    if let Err(e) = r {
        report.holds(format!("{scope}: completed without error ({e})"), false);
    }
}

fn random_pair_element(
    spec: &InstanceSpec<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<ConvElement<f64>, crate::model::ModelError> {
    let window = random_window(spec, rng);
    random_element(spec, &window, rng.gen())
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / (1.0 + scale)
}

// ---------------------------------------------------------------- core

fn core_suite(cfg: &SuiteConfig, report: &mut Report) {
    for inst in cfg.block_instances() {
        let r = core_instance(cfg, &inst.name, &inst.spec, report);
        guarded(report, &inst.name, r);
    }
}

fn core_instance(cfg: &SuiteConfig, name: &str, spec: &InstanceSpec<f64>, report: &mut Report) -> Result<(), Failure> {
    let p = |check: &str| format!("{name}: {check}");
    let validation = validate_instance(spec);
    if !report.holds(p("instance validates"), validation.passed()) {
        return Ok(());
    }
    let back: InstanceSpec<f64> = load_instance(save_instance(spec).as_bytes())?;
    report.holds(p("serialization round trip"), back == *spec);

    let mut rng = cfg.rng(&format!("core/{name}"));
    let labels: Vec<BlockLabel> = spec.labels().cloned().collect();
    let (mut assoc, mut hom, mut star_inv, mut star_anti, mut star_adj) = (0f64, 0f64, 0f64, 0f64, 0f64);
    let (mut module, mut counit, mut linear, mut idem, mut iso) = (0f64, 0f64, 0f64, 0f64, 0f64);
    let mut faithful = true;
    for _ in 0..cfg.samples {
        let f = random_pair_element(spec, &mut rng)?;
        let g = random_pair_element(spec, &mut rng)?;
        let h = random_pair_element(spec, &mut rng)?;
        let l2 = |x: &ConvElement<f64>| l2_norm(spec, x);

        let fg = convolve(spec, &f, &g)?;
        let gh = convolve(spec, &g, &h)?;
        let lhs = convolve(spec, &fg, &h)?;
        let rhs = convolve(spec, &f, &gh)?;
        assoc = assoc.max(rel(l2(&lhs.sub(&rhs))?, l2(&f)? * l2(&g)? * l2(&h)?));

        for label in &labels {
            let (pf, pg) = (represent(spec, label, &f)?, represent(spec, label, &g)?);
            let pfg = represent(spec, label, &fg)?;
            hom = hom.max(rel(pfg.max_abs_diff(&(&pf * &pg)), pf.max_abs() * pg.max_abs()));
            let psf = represent(spec, label, &star(spec, &f)?)?;
            star_adj = star_adj.max(rel(psf.max_abs_diff(&pf.adjoint()), pf.max_abs()));
        }

        let sf = star(spec, &f)?;
        star_inv = star_inv.max(rel(star(spec, &sf)?.max_abs_diff(&f), f.max_abs_diff(&ConvElement::zero())));
        let s_fg = star(spec, &fg)?;
        let sg_sf = convolve(spec, &star(spec, &g)?, &sf)?;
        star_anti = star_anti.max(rel(s_fg.max_abs_diff(&sg_sf), s_fg.max_abs_diff(&ConvElement::zero())));

        let label = &labels[rng.gen_range(0..labels.len())];
        let d = spec.block_or_err(label)?.dim();
        let v = ModuleVector::new(label.clone(), (0..d).map(|_| random_complex(&mut rng)).collect());
        let two_step = act(spec, &f, &act(spec, &g, &v)?)?;
        let one_step = act(spec, &fg, &v)?;
        let scale = represent(spec, label, &f)?.max_abs() * represent(spec, label, &g)?.max_abs() * max_abs(&v.coords);
        module = module.max(rel(max_abs_diff(&two_step.coords, &one_step.coords), scale));

        let (ef, eg) = (counit_star(&f), counit_star(&g));
        counit = counit.max(rel((counit_star(&fg) - ef * eg).norm(), ef.norm() * eg.norm()));

        let window = random_window(spec, &mut rng);
        let (a, b) = (random_complex::<f64>(&mut rng), random_complex::<f64>(&mut rng));
        let combo = project(&f.combine(a, &g, b), &window);
        let split = project(&f, &window).combine(a, &project(&g, &window), b);
        linear = linear.max(combo.max_abs_diff(&split));
        let once = project(&f, &window);
        idem = idem.max(project(&once, &window).max_abs_diff(&once));

        let ops = labels
            .iter()
            .map(|l| Ok((l.clone(), represent(spec, l, &f)?)))
            .collect::<Result<Vec<_>, crate::model::ModelError>>()?;
        let rebuilt = from_representation(spec, ops)?;
        iso = iso.max(rel(rebuilt.max_abs_diff(&f), f.max_abs_diff(&ConvElement::zero())));
        if !f.clone().normalized().is_empty() && cstar_norm(spec, &f)? <= 0.0 {
            faithful = false;
        }
    }
    let t = |x| cfg.threshold(x);
    report.at_most(p("associativity (relative L2)"), assoc, t(1e-12));
    report.at_most(p("represent is multiplicative"), hom, t(1e-12));
    report.at_most(p("represent(star f) = represent(f)^H"), star_adj, t(1e-12));
    report.at_most(p("star involutive"), star_inv, t(1e-12));
    report.at_most(p("star anti-multiplicative"), star_anti, t(1e-12));
    report.at_most(p("module law"), module, t(1e-12));
    report.at_most(p("counit multiplicative"), counit, t(1e-12));
    report.at_most(p("project linear"), linear, t(1e-15));
    report.at_most(p("project idempotent"), idem, 0.0);
    report.at_most(p("represent invertible"), iso, t(1e-12));
    report.holds(p("C* norm faithful"), faithful);

    let samples = (0..cfg.samples.min(UNIT_SAMPLES))
        .map(|_| random_pair_element(spec, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    let unit = check_approximate_unit(spec, &Filtration::by_label(spec), &samples, t(1e-12));
    report.absorb(&p(""), unit);

    intertwiner_checks(cfg, name, spec, &labels, &mut rng, report)
}

fn intertwiner_checks(
    cfg: &SuiteConfig,
    name: &str,
    spec: &InstanceSpec<f64>,
    labels: &[BlockLabel],
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<(), Failure> {
    let mut dims_ok = true;
    let mut residual = 0f64;
    for _ in 0..INTERTWINER_PATTERNS {
        let (mut source, mut target) = (Multiplicities::new(), Multiplicities::new());
        for _ in 0..3 {
            let l = labels[rng.gen_range(0..labels.len())].clone();
            *source.entry(l.clone()).or_insert(0) += rng.gen_range(0..=1);
            *target.entry(l).or_insert(0) += rng.gen_range(0..=2);
        }
        let basis = intertwiner_space(spec, &source, &target)?;
        let expected: usize = source.iter().map(|(l, s)| s * target.get(l).copied().unwrap_or(0)).sum();
        dims_ok &= basis.dim() == expected;
        residual = residual.max(basis.residual);
    }
    report.holds(format!("{name}: intertwiner dimensions match Schur"), dims_ok);
    report.at_most(format!("{name}: intertwiner residual"), residual, cfg.threshold(1e-10));
    Ok(())
}

// ---------------------------------------------------------------- norms

fn norms_suite(cfg: &SuiteConfig, report: &mut Report) {
    for inst in cfg.block_instances() {
        let r = norms_instance(cfg, &inst.name, &inst.spec, report);
        guarded(report, &inst.name, r);
    }
    for g in &cfg.groups {
        let r = regular_norms(cfg, g, report);
        guarded(report, &g.name, r);
    }
}

fn norms_instance(cfg: &SuiteConfig, name: &str, spec: &InstanceSpec<f64>, report: &mut Report) -> Result<(), Failure> {
    let p = |check: &str| format!("{name}: {check}");
    if !validate_instance(spec).passed() {
        report.holds(p("instance validates"), false);
        return Ok(());
    }
    let t = |x| cfg.threshold(x);
    let mut rng = cfg.rng(&format!("norms/{name}"));
    let nr = check_norm_inequalities(spec, rng.gen(), cfg.samples)?;
    let (a, b, c) = nr.min_slacks();
    report.at_least(p("L2 submultiplicative (min slack)"), a, t(-1e-12));
    report.at_least(p("L2 >= C* (min slack)"), b, t(-1e-12));
    report.at_least(p("C* submultiplicative (min slack)"), c, t(-1e-12));
    report.at_most(p("C*-identity (max relative error)"), nr.max_identity_rel(), t(1e-10));

    let full = spec.full_window();
    let e = approximate_unit(spec, &full)?;
    report.at_most(p("|C* norm of e_K - 1|"), (cstar_norm(spec, &e)? - 1.0).abs(), t(1e-12));
    let mut unit_l2 = 0f64;
    for block in spec.blocks() {
        let q_inv = block.q_inverse().ok_or("singular Q")?;
        let e_lambda = ConvElement::single(block.label().clone(), q_inv.scale_real(block.q_trace()));
        let expect = block.q_trace() * q_inv.trace().re;
        unit_l2 = unit_l2.max((l2_norm(spec, &e_lambda)?.powi(2) - expect).abs() / expect);
    }
    report.at_most(p("|e_lambda|^2 = tr Q tr Q^-1 (relative)"), unit_l2, t(1e-12));

    let chain = Filtration::by_label(spec);
    let mut monotone = true;
    let mut exact = true;
    for _ in 0..cfg.samples.min(UNIT_SAMPLES) {
        let f = random_pair_element(spec, &mut rng)?;
        let cover = TruncationWindow::covering(&f);
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for k in chain.windows() {
            let (l2, cs) = truncation_tail(spec, &f, k)?;
            monotone &= l2 <= prev.0 && cs <= prev.1;
            if cover.is_subset(k) {
                exact &= l2 == 0.0 && cs == 0.0;
            }
            prev = (l2, cs);
        }
    }
    report.holds(p("truncation tails non-increasing"), monotone);
    report.holds(p("truncation tails vanish once K covers supp f"), exact);
    Ok(())
}

fn regular_norms(cfg: &SuiteConfig, g: &NamedGroup, report: &mut Report) -> Result<(), Failure> {
    let name = &g.name;
    let spec = instance_from_group(&g.table, &g.irreps)?;
    let n = g.table.order() as f64;
    let mut rng = cfg.rng(&format!("regular/{name}"));
    let (mut reg, mut parseval, mut l2) = (0f64, 0f64, 0f64);
    for _ in 0..cfg.samples {
        let f = random_function::<f64>(&g.table, rng.gen());
        let h = random_function::<f64>(&g.table, rng.gen());
        let (ff, fh) = (fourier(&g.table, &g.irreps, &f)?, fourier(&g.table, &g.irreps, &h)?);
        let direct = operator_norm(&left_convolution_matrix(&g.table, &f))?;
        reg = reg.max((cstar_norm(&spec, &ff)? - direct).abs());
        let sum: C<f64> = f.iter().zip(&h).map(|(a, b)| a * b.conj()).sum::<C<f64>>() / n;
        parseval = parseval.max((inner_product(&spec, &ff, &fh)? - sum).norm());
        let euclid = (f.iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt();
        l2 = l2.max((l2_norm(&spec, &ff)? - euclid).abs());
    }
    let t = |x| cfg.threshold(x);
    report.at_most(format!("{name}: C* norm = regular representation norm"), reg, t(1e-8));
    report.at_most(format!("{name}: Parseval"), parseval, t(1e-11));
    report.at_most(format!("{name}: L2 norm = normalized Euclidean norm"), l2, t(1e-11));
    Ok(())
}

// ---------------------------------------------------------------- oracle

fn oracle_suite(cfg: &SuiteConfig, report: &mut Report) {
    for g in &cfg.groups {
        let r = oracle_group(cfg, g, report);
        guarded(report, &g.name, r);
    }
}

/// Same labels with the same dimensions as the irreps of `irreps`.
fn matches_group(spec: &InstanceSpec<f64>, irreps: &IrrepSet<f64>) -> bool {
    spec.len() == irreps.irreps.len()
        && irreps
            .irreps
            .iter()
            .all(|r| spec.block(&r.label).is_some_and(|b| b.dim() == r.dim()))
}

fn oracle_group(cfg: &SuiteConfig, g: &NamedGroup, report: &mut Report) -> Result<(), Failure> {
    let name = &g.name;
    let p = |check: &str| format!("{name}: {check}");
    let t = |x| cfg.threshold(x);
    let irreps_report = validate_irreps(&g.table, &g.irreps, t(1e-12));
    let irreps_ok = irreps_report.passed();
    report.absorb(&p("irreps "), irreps_report);
    if !irreps_ok {
        return Ok(());
    }
    let (pres, haar) = build_function_hopf::<f64>(&g.table);
    report.absorb(&p("C(G) "), validate_hopf(&pres, t(1e-12)));
    let integral = compute_integral(&pres)?;
    report.at_most(p("integral is Haar"), max_abs_diff(&integral.values, &haar.values), t(1e-12));
    let oracle = HopfOracle::new(pres, integral)?;
    let order = g.table.order();
    let basis: Vec<Vec<C<f64>>> = (0..order).map(|i| oracle.presentation().basis_vector(i)).collect();

    let cond = oracle.pairing_condition();
    report.at_most(p("pairing Gram condition number"), cond, 1e6);

    let (mut classical, mut forms, mut embed) = (0f64, 0f64, 0f64);
    for a in &basis {
        for b in &basis {
            let conv = oracle.conv_abstract(a, b);
            classical = classical.max(max_abs_diff(&conv, &group_convolution(&g.table, a, b)));
            forms = forms.max(max_abs_diff(&conv, &oracle.conv_abstract_alt(a, b)));
            let lhs = oracle.embed_functional(&conv);
            let rhs = crate::oracle::dual_convolve(
                oracle.presentation(),
                &oracle.embed_functional(a),
                &oracle.embed_functional(b),
            );
            embed = embed.max(max_abs_diff(&lhs, &rhs));
        }
    }
    report.at_most(p("abstract convolution = classical convolution"), classical, t(1e-13));
    report.at_most(p("both convolution forms agree"), forms, t(1e-13));
    report.at_most(p("embedding into H* is multiplicative"), embed, t(1e-12));

    let eps = &oracle.presentation().epsilon;
    report.at_most(p("q = counit"), max_abs_diff(oracle.q_functional(), eps), t(1e-12));
    report.at_most(p("p = evaluation at identity"), max_abs_diff(oracle.p_functional(), eps), t(1e-12));
    match co_inner_residual(&oracle) {
        Some(r) => report.at_most(p("S^2 = q(h1) h2 q^-1(h3)"), r, t(1e-12)),
        None => report.holds(p("q is convolution invertible"), false),
    };

    // Reflection matrices, comodule laws and the two functors per irrep.
    let group_spec = instance_from_group(&g.table, &g.irreps)?;
    let (mut q_id, mut int1, mut trace, mut laws, mut round, mut action) = (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    for irrep in &g.irreps.irreps {
        let comodule = comodule_of_irrep(irrep);
        let (dl, el) = comodule.law_residuals(oracle.presentation());
        laws = laws.max(dl).max(el);
        let data = oracle.reflection_matrices(&comodule)?;
        q_id = q_id.max(data.q.max_abs_diff(&CMatrix::identity(irrep.dim())));
        int1 = int1.max(data.int_residual).max(data.int2_residual);
        trace = trace.max(data.trace_minus_dim.norm());

        let mut generator = vec![c(0., 0.); irrep.dim()];
        generator[0] = c(1., 0.);
        let (back, _) = oracle.action_to_coaction(&oracle.module_of(&comodule), &generator)?;
        for (x, y) in back.coefficient_vectors().iter().zip(comodule.coefficient_vectors()) {
            round = round.max(max_abs_diff(x, y));
        }
        for h in &basis {
            let block = represent(&group_spec, &irrep.label, &fourier(&g.table, &g.irreps, h)?)?;
            action = action.max(block.max_abs_diff(&oracle.action_matrix(&comodule, h)));
        }
    }
    report.at_most(p("irrep coefficients satisfy the comodule laws"), laws, t(1e-12));
    report.at_most(p("reflection matrix = identity"), q_id, t(1e-12));
    report.at_most(p("integral orthogonality with Q and Q^-1"), int1, t(1e-10));
    report.at_most(p("trace identity q(sum u_ii) = d"), trace, t(1e-12));
    report.at_most(p("coaction -> action -> coaction round trip"), round, t(1e-10));
    report.at_most(p("block action = comodule action"), action, t(1e-12));

    comodule_hom_checks(cfg, g, &oracle, &group_spec, report)?;

    // Fourier transport, against every block instance shaped like the group.
    let mut targets = vec![(name.clone(), group_spec.clone())];
    targets.extend(
        cfg.instances
            .iter()
            .filter(|i| matches_group(&i.spec, &g.irreps))
            .map(|i| (i.name.clone(), i.spec.clone())),
    );
    for (label, spec) in &targets {
        if label != name {
            let mut q_err = 0f64;
            for irrep in &g.irreps.irreps {
                let data = oracle.reflection_matrices(&comodule_of_irrep(irrep))?;
                q_err = q_err.max(spec.block_or_err(&irrep.label)?.q().max_abs_diff(&data.q));
            }
            report.at_most(p(&format!("{label}: Q matches the reflection matrices")), q_err, t(1e-12));
        }
        fourier_checks(cfg, g, label, spec, report)?;
    }
    Ok(())
}

fn comodule_hom_checks(
    cfg: &SuiteConfig,
    g: &NamedGroup,
    oracle: &HopfOracle<f64>,
    spec: &InstanceSpec<f64>,
    report: &mut Report,
) -> Result<(), Failure> {
    let mut rng = cfg.rng(&format!("hom/{}", g.name));
    let comodules: BTreeMap<BlockLabel, ComodulePresentation<f64>> = group_decomposition(&g.irreps).into_iter().collect();
    let labels: Vec<&BlockLabel> = comodules.keys().collect();
    let mut dims_ok = true;
    let mut transport = 0f64;
    for _ in 0..4 {
        let mut pick = |max: usize| {
            let mut m = Multiplicities::new();
            for _ in 0..2 {
                *m.entry(labels[rng.gen_range(0..labels.len())].clone()).or_insert(0) += rng.gen_range(1..=max);
            }
            m
        };
        let (source, target) = (pick(1), pick(2));
        let sum = |m: &Multiplicities| {
            let parts: Vec<&ComodulePresentation<f64>> =
                m.iter().flat_map(|(l, &k)| std::iter::repeat_n(&comodules[l], k)).collect();
            ComodulePresentation::direct_sum(&parts)
        };
        let (v, w) = (sum(&source), sum(&target));
        let maps = comodule_hom_space(&v, &w);
        dims_ok &= maps.len() == intertwiner_space(spec, &source, &target)?.dim();
        for t in &maps {
            for i in 0..oracle.dim() {
                let h = oracle.presentation().basis_vector(i);
                let lhs = &oracle.action_matrix(&w, &h) * t;
                let rhs = t * &oracle.action_matrix(&v, &h);
                transport = transport.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    let name = &g.name;
    report.holds(format!("{name}: comodule Hom dimensions = intertwiner dimensions"), dims_ok);
    report.at_most(format!("{name}: comodule maps commute with actions"), transport, cfg.threshold(1e-12));
    Ok(())
}

fn fourier_checks(
    cfg: &SuiteConfig,
    g: &NamedGroup,
    label: &str,
    spec: &InstanceSpec<f64>,
    report: &mut Report,
) -> Result<(), Failure> {
    let (table, irreps) = (&g.table, &g.irreps);
    let n = table.order() as f64;
    let p = |check: &str| format!("{}: {label}: {check}", g.name);
    let t = |x| cfg.threshold(x);
    let mut rng = cfg.rng(&format!("fourier/{}/{label}", g.name));
    let (mut theorem, mut trip, mut counit) = (0f64, 0f64, 0f64);
    for _ in 0..cfg.samples {
        let f = random_function::<f64>(table, rng.gen());
        let h = random_function::<f64>(table, rng.gen());
        let (ff, fh) = (fourier(table, irreps, &f)?, fourier(table, irreps, &h)?);
        let lhs = fourier(table, irreps, &group_convolution(table, &f, &h))?;
        let rhs = convolve(spec, &ff, &fh)?;
        let norm = |x: &[C<f64>]| (x.iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt();
        theorem = theorem.max(rel(l2_norm(spec, &lhs.sub(&rhs))?, norm(&f) * norm(&h)));
        trip = trip.max(max_abs_diff(&inverse_fourier(table, irreps, &ff)?, &f));
        let back = fourier(table, irreps, &inverse_fourier(table, irreps, &fh)?)?;
        trip = trip.max(back.max_abs_diff(&fh));
        counit = counit.max((counit_star(&ff) - f.iter().sum::<C<f64>>() / n).norm());
    }
    report.at_most(p("fourier(f * g) = fourier f * fourier g (relative L2)"), theorem, t(1e-10));
    report.at_most(p("fourier round trip"), trip, t(1e-11));
    report.at_most(p("counit transport"), counit, t(1e-11));

    let mut unit = 0f64;
    for k in Filtration::by_label(spec).windows() {
        let mut e = vec![c(0., 0.); table.order()];
        for r in irreps.irreps.iter().filter(|r| k.contains(&r.label)) {
            for (x, v) in e.iter_mut().enumerate() {
                *v += r.character(x) * r.dim() as f64;
            }
        }
        let fe = fourier(table, irreps, &e)?;
        unit = unit.max(fe.max_abs_diff(&approximate_unit(spec, k)?));
    }
    report.at_most(p("character sums are the approximate units"), unit, t(1e-11));
    Ok(())
}

// ---------------------------------------------------------------- hopf

fn hopf_suite(cfg: &SuiteConfig, report: &mut Report) {
    for g in &cfg.groups {
        let r = hopf_group(cfg, g, report);
        guarded(report, &g.name, r);
    }
    for h in &cfg.hopfs {
        let r = hopf_presentation(cfg, h, report);
        guarded(report, &h.name, r);
    }
}

fn dual_structure_checks(
    cfg: &SuiteConfig,
    name: &str,
    oracle: &HopfOracle<f64>,
    windows: &[WindowProjector<f64>],
    report: &mut Report,
) -> Result<(), Failure> {
    let t = |x| cfg.threshold(x);
    let p = |check: &str| format!("{name}: {check}");
    let (coassoc, counit) = oracle.coproduct_star_laws()?;
    report.at_most(p("dual coproduct coassociative"), coassoc, t(1e-12));
    report.at_most(p("dual counit law"), counit, t(1e-12));

    let mut rng = cfg.rng(&format!("dual/{name}"));
    let n = oracle.dim();
    let mut mult = 0f64;
    for _ in 0..cfg.samples.min(DUAL_PAIRS) {
        let f: Vec<C<f64>> = (0..n).map(|_| random_complex(&mut rng)).collect();
        let h: Vec<C<f64>> = (0..n).map(|_| random_complex(&mut rng)).collect();
        mult = mult.max(oracle.coproduct_star_multiplicativity(&f, &h)?);
    }
    report.at_most(p("dual coproduct multiplicative"), mult, t(1e-10));

    let (mut antipode, mut duality) = (0f64, 0f64);
    for k in windows {
        antipode = antipode.max(oracle.approximate_antipode_residual(k)?);
        duality = duality.max(oracle.antipode_star_duality(k)?);
    }
    report.at_most(p("S_K(f1) * f2 = integral(f) e_K"), antipode, t(1e-10));
    report.at_most(p("antipode duality on H_K"), duality, t(1e-12));
    Ok(())
}

fn hopf_group(cfg: &SuiteConfig, g: &NamedGroup, report: &mut Report) -> Result<(), Failure> {
    let (pres, haar) = build_function_hopf::<f64>(&g.table);
    let n = pres.dim();
    let oracle = HopfOracle::new(pres, haar)?;
    let spec = instance_from_group(&g.table, &g.irreps)?;
    let blocks = group_decomposition(&g.irreps);
    let chain = dual_closed_windows(&spec);
    let windows = chain
        .iter()
        .map(|k| WindowProjector::from_blocks(n, &blocks, k))
        .collect::<Result<Vec<_>, _>>()?;
    dual_structure_checks(cfg, &g.name, &oracle, &windows, report)?;

    // The unit of H_K in C(G) is the character sum Σ_{λ∈K} d_λ χ_λ.
    let mut unit = 0f64;
    for (k, proj) in chain.iter().zip(&windows) {
        let e = oracle.subalgebra_unit(proj)?;
        let mut expect = vec![c(0., 0.); n];
        for r in g.irreps.irreps.iter().filter(|r| k.contains(&r.label)) {
            for (x, v) in expect.iter_mut().enumerate() {
                *v += r.character(x) * r.dim() as f64;
            }
        }
        unit = unit.max(max_abs_diff(&e, &expect));
        unit = unit.max((oracle.counit_star(&e) - c(1., 0.)).norm());
    }
    report.at_most(format!("{}: oracle e_K = character sum, counit 1", g.name), unit, cfg.threshold(1e-11));
    Ok(())
}

fn hopf_presentation(cfg: &SuiteConfig, h: &NamedHopf, report: &mut Report) -> Result<(), Failure> {
    let name = &h.name;
    let t = |x| cfg.threshold(x);
    let axioms = validate_hopf(&h.presentation, t(1e-12));
    let ok = axioms.passed();
    report.absorb(&format!("{name}: "), axioms);

    // Presentations on a group's elements must be that group's C(G).
    for g in &cfg.groups {
        if h.presentation.basis == g.table.elements() {
            let (reference, _) = build_function_hopf::<f64>(&g.table);
            report.at_most(
                format!("{name}: matches C({})", g.name),
                presentation_distance(&h.presentation, &reference),
                t(1e-12),
            );
        }
    }
    if !ok {
        return Ok(());
    }
    let integral = compute_integral(&h.presentation)?;
    let oracle = HopfOracle::new(h.presentation.clone(), integral)?;
    report.at_most(format!("{name}: pairing Gram condition number"), oracle.pairing_condition(), 1e6);
    match co_inner_residual(&oracle) {
        Some(r) => report.at_most(format!("{name}: S^2 = q(h1) h2 q^-1(h3)"), r, t(1e-12)),
        None => report.holds(format!("{name}: q is convolution invertible"), false),
    };
    let n = oracle.dim();
    let mut forms = 0f64;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (oracle.presentation().basis_vector(i), oracle.presentation().basis_vector(j));
            forms = forms.max(max_abs_diff(&oracle.conv_abstract(&a, &b), &oracle.conv_abstract_alt(&a, &b)));
        }
    }
    report.at_most(format!("{name}: both convolution forms agree"), forms, t(1e-13));
    dual_structure_checks(cfg, name, &oracle, &[WindowProjector::full(n)], report)
}

/// The label filtration with each window closed under `λ ↦ λ*`. The
/// antipode exchanges `H_λ` and `H_λ*`, so its truncation only satisfies
/// the approximate-antipode identity on such windows.
fn dual_closed_windows(spec: &InstanceSpec<f64>) -> Vec<TruncationWindow> {
    let mut out: Vec<TruncationWindow> = Vec::new();
    for k in Filtration::by_label(spec).windows() {
        let labels = k
            .labels()
            .flat_map(|l| [l.clone(), spec.block(l).map_or_else(|| l.clone(), |b| b.dual().clone())]);
        let closed = TruncationWindow::new(labels).expect("window contains 0");
        if out.last() != Some(&closed) {
            out.push(closed);
        }
    }
    out
}

/// Largest difference between the structure constants of two presentations
/// of the same dimension.
fn presentation_distance(a: &HopfPresentation<f64>, b: &HopfPresentation<f64>) -> f64 {
    let n = a.dim();
    let mut d = max_abs_diff(&a.unit, &b.unit).max(max_abs_diff(&a.epsilon, &b.epsilon));
    d = d.max(a.antipode.max_abs_diff(&b.antipode)).max(a.star.max_abs_diff(&b.star));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                d = d.max((a.m.get(i, j, k) - b.m.get(i, j, k)).norm());
                d = d.max((a.delta.get(i, j, k) - b.delta.get(i, j, k)).norm());
            }
        }
    }
    d
}
