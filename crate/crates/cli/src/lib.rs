//! Command-line front end: each subcommand runs one computation, checks its
//! expected properties and emits a JSON report.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nearcy::calibration::{is_lagrangian, is_special_lagrangian, lambda_phase, mclean_samples, su3_witness, Plane3};
use nearcy::cartan::{build_admissible_system, build_nearly_cy_system, EDSSystem};
use nearcy::curvature::{normalize_scalar, twistor_nijenhuis, twistor_torsion, CurvatureMinus};
use nearcy::quat::{
    involution_action, match_displayed_equation, maurer_cartan_derive_from, sample_fixed_locus, ComponentMap,
    FixedLocusSample, Group,
};
use nearcy::scalar::{format_rational, int, parse_rational};
use nearcy::su3::{classify_torsion, omega_space, read_torsion, trace3, TorsionTensor};
use nearcy::surd::Surd;
use nearcy::GaussianRational as G;
use num::rational::BigRational;
use num::Zero;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Every anchor an assertion may carry.
pub const ANCHORS: &[&str] = &[
    "cartan.integral-rank",
    "cartan.characters",
    "cartan.involutive",
    "cartan.polar-relation",
    "cartan.degenerate-locus",
    "torsion.round-trip",
    "torsion.classification",
    "twistor.nijenhuis",
    "twistor.trace",
    "twistor.classification",
    "curvature.trace-free",
    "curvature.reassembly",
    "curvature.self-dual-einstein",
    "frames.component-map",
    "frames.structure-equations",
    "frames.d-squared",
    "frames.involution",
    "frames.fixed-locus",
    "calibration.lagrangian",
    "calibration.special-lagrangian",
    "calibration.witness",
    "calibration.normal-identity",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub paper_anchor: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub assertions: Vec<Assertion>,
    pub results: Value,
    pub exit_status: i32,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            assertions: Vec::new(),
            results: Value::Null,
            exit_status: 0,
        }
    }

    fn check(&mut self, name: &str, anchor: &str, ok: bool, detail: impl Into<String>) {
        debug_assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor}");
        self.assertions.push(Assertion {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn finish(mut self, results: Value) -> Self {
        self.results = results;
        self.exit_status = if self.all_pass() { 0 } else { 1 };
        self
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A usage or input error; exit status 2. `--help` and `--version` also land
/// here with `info` set and exit 0.
#[derive(Debug)]
pub struct UsageError {
    pub message: String,
    pub info: bool,
}

impl UsageError {
    fn new(message: String) -> Self {
        Self { message, info: false }
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser, Debug)]
#[command(name = "nearcy", version, about = "Exact SU(3)-structure computations with JSON reports")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemArg {
    NearlyCy,
    Admissible,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagArg {
    Default,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupArg {
    Sp2,
    Sp11,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Sp2 => Group::Sp2,
            GroupArg::Sp11 => Group::Sp11,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbArg {
    TauFlip,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan's test on the nearly Calabi-Yau or admissible system.
    Cartan {
        #[arg(long, value_enum)]
        system: SystemArg,
        /// Value of the constant `a` for the admissible system.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a0: String,
        #[arg(long, value_enum, default_value = "default")]
        flag: FlagArg,
    },
    /// Classify a torsion tensor read from JSON.
    Torsion {
        #[arg(long)]
        input: PathBuf,
        /// Treat the structure as carrying the extra μ-type torsion.
        #[arg(long)]
        mu: bool,
    },
    /// Torsion of the twistor space of a self-dual Einstein 4-manifold.
    Twistor {
        #[arg(long, allow_hyphen_values = true)]
        scalar: String,
        /// Rescale the metric first so that the scalar curvature is 24, −48 or 0.
        #[arg(long)]
        normalize: bool,
    },
    /// Split an R₋ curvature block read from JSON.
    Curvature {
        #[arg(long)]
        input: PathBuf,
    },
    /// Derive the structure equations from the Maurer-Cartan form.
    MaurerCartan {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long, value_enum)]
        perturb: Option<PerturbArg>,
    },
    /// Check the real structure C on the frame bundle.
    Involution {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
    /// Sample the fixed locus of C exactly.
    FixedLocus {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Lagrangian and special Lagrangian tests for a 3-plane read from JSON.
    Calibrate {
        #[arg(long)]
        plane: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// The normal-vector identity on random special Lagrangian planes.
    McleanCheck {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

fn rational(s: &str) -> Result<BigRational, UsageError> {
    parse_rational(s).map_err(|e| UsageError::new(format!("invalid rational {s:?}: {}", e.0)))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, UsageError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| UsageError::new(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError::new(format!("invalid input {}: {e}", path.display())))
}

fn ser<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn internal(e: impl std::fmt::Display) -> UsageError {
    UsageError::new(format!("computation failed: {e}"))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Result<(Report, Option<PathBuf>), UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli =
        Cli::try_parse_from(argv).map_err(|e| UsageError { message: e.render().to_string(), info: !e.use_stderr() })?;
    let seed = cli.seed;
    let report = match &cli.command {
        Command::Cartan { system, a0, flag } => cartan(*system, a0, *flag, seed)?,
        Command::Torsion { input, mu } => torsion(input, *mu)?,
        Command::Twistor { scalar, normalize } => twistor(scalar, *normalize)?,
        Command::Curvature { input } => curvature(input)?,
        Command::MaurerCartan { group, perturb } => maurer_cartan(*group, *perturb)?,
        Command::Involution { group, pairs } => involution(*group, *pairs, seed)?,
        Command::FixedLocus { group, samples } => fixed_locus(*group, *samples, seed)?,
        Command::Calibrate { plane, witness } => calibrate(plane, *witness)?,
        Command::McleanCheck { samples } => mclean(*samples, seed)?,
    };
    Ok((report, cli.json))
}

fn cartan(system: SystemArg, a0: &str, flag: FlagArg, seed: u64) -> Result<Report, UsageError> {
    let a = rational(a0)?;
    let mut inputs = json!({"system": system, "flag": flag, "seed": seed});
    let sys: EDSSystem = match system {
        SystemArg::NearlyCy => build_nearly_cy_system(),
        SystemArg::Admissible => {
            inputs["a0"] = json!(format_rational(&a));
            let zero = [G::zero(), G::zero(), G::zero()];
            build_admissible_system(&G::real(a.clone()), &zero).map_err(internal)?
        }
    };
    let mut rep = Report::new("cartan", inputs);
    let f = match flag {
        FlagArg::Default => sys.default_flag(),
        FlagArg::Random => sys.random_flag(seed),
    }
    .map_err(internal)?;
    let r = sys.cartan_test(&f).map_err(internal)?;
    let rank_detail = format!("rank {}", r.integral_rank);
    match system {
        SystemArg::NearlyCy => {
            rep.check("integral element rank is 34", "cartan.integral-rank", r.integral_rank == 34, rank_detail);
            rep.check(
                "characters are (0,0,1,3,6,9,9)",
                "cartan.characters",
                r.s == [0, 0, 1, 3, 6, 9, 9],
                format!("{:?}", r.s),
            );
            rep.check(
                "system is involutive",
                "cartan.involutive",
                r.involutive,
                format!("{} = {}", r.test_lhs, r.test_rhs),
            );
            let rel = sys.polar_relation_check().map_err(internal)?;
            rep.check(
                "four-term polar relation vanishes",
                "cartan.polar-relation",
                rel.holds,
                rel.residual.to_string(),
            );
        }
        SystemArg::Admissible if !a.is_zero() => {
            rep.check("integral element rank is 35", "cartan.integral-rank", r.integral_rank == 35, rank_detail);
            rep.check(
                "characters are (0,0,1,3,6,10,15)",
                "cartan.characters",
                r.s == [0, 0, 1, 3, 6, 10, 15],
                format!("{:?}", r.s),
            );
            rep.check(
                "system is involutive",
                "cartan.involutive",
                r.involutive,
                format!("{} = {}", r.test_lhs, r.test_rhs),
            );
        }
        SystemArg::Admissible => {
            rep.check("integral element rank is 35", "cartan.integral-rank", r.integral_rank == 35, rank_detail);
            rep.check("c5 is at most 17", "cartan.degenerate-locus", r.c[5] <= 17, format!("c5 = {}", r.c[5]));
            rep.check(
                "test fails on the degenerate locus",
                "cartan.degenerate-locus",
                !r.involutive,
                format!("{} < {}", r.test_lhs, r.test_rhs),
            );
        }
    }
    Ok(rep.finish(ser(&r)))
}

fn torsion(input: &PathBuf, mu: bool) -> Result<Report, UsageError> {
    let t: TorsionTensor = read_json(input)?;
    let mut rep = Report::new("torsion", json!({"input": input, "mu": mu}));
    let dw = t.torsion_forms(&omega_space()).map_err(internal)?;
    let (n, s) = read_torsion(&dw).map_err(internal)?;
    rep.check(
        "torsion read back from the structure equations",
        "torsion.round-trip",
        n == t.n && s == t.s,
        "N and S recovered from dω",
    );
    let class = classify_torsion(&t, mu);
    rep.check("classification computed", "torsion.classification", true, class.tag());
    Ok(rep.finish(json!({"class": ser(&class), "torsion": ser(&t)})))
}

fn twistor(scalar: &str, normalize: bool) -> Result<Report, UsageError> {
    let s0 = rational(scalar)?;
    let (s, factor) = if normalize { normalize_scalar(&s0) } else { (s0.clone(), int(1)) };
    let mut rep = Report::new("twistor", json!({"scalar": format_rational(&s0), "normalize": normalize}));
    let (n, class) = twistor_torsion(&s);
    rep.check("N = diag(1, 1, s/24)", "twistor.nijenhuis", n == twistor_nijenhuis(&s), format!("N33 = {}", n[2][2]));
    let tr = trace3(&n);
    rep.check("trace N = 2 + s/24", "twistor.trace", tr == G::real(int(2) + &s / int(24)), tr.to_string());
    let expected = if s == int(24) {
        Some("NearlyKahler")
    } else if s == int(-48) {
        Some("NearlyCalabiYauStrict")
    } else if s.is_zero() {
        Some("Admissible")
    } else {
        None
    };
    if let Some(tag) = expected {
        rep.check(&format!("classified {tag}"), "twistor.classification", class.tag() == tag, class.tag());
    }
    Ok(rep.finish(json!({
        "scalar": format_rational(&s),
        "rescale_factor": format_rational(&factor),
        "N": ser(&n),
        "class": ser(&class),
    })))
}

fn curvature(input: &PathBuf) -> Result<Report, UsageError> {
    let rm: CurvatureMinus = read_json(input)?;
    let mut rep = Report::new("curvature", json!({"input": input}));
    let d = rm.decompose();
    rep.check("W- is trace free", "curvature.trace-free", trace3(&d.w_minus).is_zero(), trace3(&d.w_minus).to_string());
    rep.check(
        "(Z, W-, s) reassembles the input",
        "curvature.reassembly",
        d.reassemble().ok().as_ref() == Some(&rm),
        "",
    );
    let sde = rm.is_self_dual_einstein();
    let mut results = json!({"decomposition": ser(&d), "self_dual_einstein": sde});
    if sde {
        let vanish = d.z.iter().chain(&d.w_minus).flatten().all(G::is_zero);
        let s24 = G::real(d.s.clone()) == &rm.c[1] * &G::from_int(24);
        rep.check(
            "self-dual Einstein: Z = W- = 0 and s = 24 C2",
            "curvature.self-dual-einstein",
            vanish && s24,
            format!("s = {}", format_rational(&d.s)),
        );
        let (n, class) = twistor_torsion(&d.s);
        results["twistor"] = json!({"N": ser(&n), "class": ser(&class)});
    }
    Ok(rep.finish(results))
}

fn maurer_cartan(group: GroupArg, perturb: Option<PerturbArg>) -> Result<Report, UsageError> {
    let g: Group = group.into();
    let mut rep = Report::new("maurer-cartan", json!({"group": group, "perturb": perturb}));
    let mut map = ComponentMap::standard(g);
    if perturb.is_some() {
        map = map.with_tau_flipped();
    }
    let rank = map.rank();
    rep.check("component map has rank 10", "frames.component-map", rank == 10, format!("rank {rank}"));
    let mc = maurer_cartan_derive_from(&map).map_err(internal)?;
    let m = match_displayed_equation(&mc);
    rep.check(
        "dω matches the displayed structure equations",
        "frames.structure-equations",
        m.matches,
        if m.matches { "all coefficients agree".to_string() } else { m.diffs.join("; ") },
    );
    let fails = mc.d_squared_failures();
    rep.check("d² = 0 on every generator", "frames.d-squared", fails.is_empty(), fails.join(", "));
    let space = mc.equations.space().clone();
    let differentials: serde_json::Map<String, Value> =
        (0..space.len()).map(|k| (format!("d{}", space.name(k)), json!(mc.d(space.name(k)).to_string()))).collect();
    let normalizations: Vec<Value> = [("1", Surd::from(G::one())), ("1/sqrt2", Surd::inv_sqrt2())]
        .into_iter()
        .map(|(label, c)| {
            let matches = maurer_cartan_derive_from(&ComponentMap::scaled(g, &c))
                .map(|mc| match_displayed_equation(&mc).matches)
                .unwrap_or(false);
            json!({"off_diagonal_scale": label, "matches": matches})
        })
        .collect();
    Ok(rep.finish(json!({
        "differentials": differentials,
        "diffs": m.diffs,
        "normalizations": normalizations,
    })))
}

fn involution(group: GroupArg, pairs: usize, seed: u64) -> Result<Report, UsageError> {
    let r = involution_action(group.into(), pairs, seed).map_err(internal)?;
    let mut rep = Report::new("involution", json!({"group": group, "pairs": pairs, "seed": seed}));
    let a = "frames.involution";
    rep.check("C*ωᵢ = conj(ωᵢ)", a, r.omega_to_conjugate, "");
    rep.check("C(pq) = C(p)C(q)", a, r.automorphism, format!("{pairs} pairs"));
    rep.check("C∘C = id", a, r.squares_to_identity, "");
    rep.check("C*Ω = −Ω", a, r.omega_reversed, "");
    rep.check("C*Ψ = conj(Ψ)", a, r.psi_conjugated, "");
    Ok(rep.finish(json!({"generator_map": r.generator_map})))
}

fn fixed_locus(group: GroupArg, n: usize, seed: u64) -> Result<Report, UsageError> {
    let samples = sample_fixed_locus(group.into(), n, seed).map_err(|e| UsageError::new(e.to_string()))?;
    let mut rep = Report::new("fixed-locus", json!({"group": group, "samples": n, "seed": seed}));
    let a = "frames.fixed-locus";
    type Pick = fn(&FixedLocusSample) -> bool;
    let count = |f: Pick| samples.iter().filter(|s| !f(s)).count();
    let checks: [(&str, Pick); 7] = [
        ("points lie on the quadric", |s| s.on_quadric),
        ("frames lie in the group", |s| s.frame_in_group),
        ("tangent vectors are fixed by C", |s| s.tangent_in_fixed_algebra),
        ("ωᵢ are real on tangent vectors", |s| s.values_real),
        ("Ω vanishes on the tangent plane", |s| s.omega_vanishes),
        ("Im Ψ vanishes on the tangent plane", |s| s.psi_vanishes),
        ("Re Ψ is positive on the oriented tangent plane", |s| s.phi_positive),
    ];
    for (name, f) in checks {
        let bad = count(f);
        rep.check(name, a, bad == 0, format!("{bad} of {n} samples fail"));
    }
    Ok(rep.finish(ser(&samples)))
}

fn calibrate(path: &PathBuf, witness: bool) -> Result<Report, UsageError> {
    let plane: Plane3 = read_json(path)?;
    let mut rep = Report::new("calibrate", json!({"plane": path, "witness": witness}));
    let lag = is_lagrangian(&plane);
    rep.check("plane is Lagrangian", "calibration.lagrangian", lag, "Ω₀ on pairs of basis vectors");
    let sl = is_special_lagrangian(&plane);
    rep.check("plane is special Lagrangian", "calibration.special-lagrangian", sl, "Im Ψ₀ on the basis");
    let mut results = json!({"plane": ser(&plane)});
    if lag {
        results["lambda"] = ser(&lambda_phase(&plane).map_err(internal)?);
    }
    if witness && sl {
        let w = su3_witness(&plane).map_err(internal)?;
        rep.check(
            "witness is in SU(3) and maps the plane to R³",
            "calibration.witness",
            w.within(1e-9),
            format!("residuals {:.1e} {:.1e} {:.1e}", w.unitary_residual, w.det_residual, w.image_residual),
        );
        results["witness"] = ser(&w);
    }
    Ok(rep.finish(results))
}

fn mclean(n: usize, seed: u64) -> Result<Report, UsageError> {
    let samples = mclean_samples(n, seed);
    let mut rep = Report::new("mclean-check", json!({"samples": n, "seed": seed}));
    let bad = samples.iter().filter(|s| !s.check.holds).count();
    rep.check(
        "V⌟ψ₀ = −*(V⌟Ω₀) on E",
        "calibration.normal-identity",
        bad == 0 && n > 0,
        format!("{bad} of {n} samples fail"),
    );
    Ok(rep.finish(ser(&samples)))
}
