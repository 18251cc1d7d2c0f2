//! Subcommand execution. Every subcommand resolves and validates its flags
//! first, so any error raised afterwards is a compute error.

use std::f64::consts::PI;
use std::fmt;

use hchain_core::observables::{
    bragg_analysis, bragg_point_grid, density_profile, geometric_offsets, moessbauer_profile,
    order_classification, uniform_grid, FluctuationKind,
};
use hchain_core::units::alpha_from_nucleons;
use hchain_core::{
    fluctuation_profile, mode_set, oscillator_variance, pair_variance_matrix, ChainError,
    ChainParams, CurveMeta, Dispersion, PairMethod, Regime, StructureFactor, StructureMethod,
    PAIR_EXACT_MAX,
};
use serde_json::{json, Map, Value};

use crate::args::{ChainArgs, Command, Method, OrderRegime};
use crate::table::{float, Column, Table};

#[derive(Debug)]
pub enum CliError {
    /// Invalid flag values or combinations.
    Usage(String),
    /// Failure after validation, including I/O.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn compute(e: ChainError) -> CliError {
    CliError::Compute(e.to_string())
}

/// Computed table plus the resolved configuration that produced it.
pub struct Report {
    pub table: Table,
    pub meta: Map<String, Value>,
}

/// Resolved configuration, recorded both as named fields and as the
/// canonical argument list that reproduces the run.
struct Meta {
    command: &'static str,
    fields: Map<String, Value>,
    args: Vec<String>,
}

impl Meta {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            fields: Map::new(),
            args: vec![command.to_string()],
        }
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    fn flag(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.args.push(format!("--{name}={value}"));
        self
    }

    fn float_flag(self, name: &str, value: f64) -> Self {
        self.flag(name, float(value))
    }

    fn switch(mut self, name: &str, on: bool) -> Self {
        if on {
            self.args.push(format!("--{name}"));
        }
        self
    }

    fn chain(self, chain: &Chain) -> Self {
        let p = &chain.params;
        let m = self
            .field("params", serde_json::to_value(p).expect("serializable"))
            .field(
                "regime",
                serde_json::to_value(chain.regime).expect("serializable"),
            )
            .flag("n", p.n_atoms)
            .float_flag("alpha", p.alpha)
            .float_flag("pin-ratio", p.pin_ratio)
            .switch("linearized", p.dispersion == Dispersion::Linearized);
        match chain.regime {
            Regime::Classical { eta_cl } => {
                m.switch("classical", true).float_flag("eta-cl", eta_cl)
            }
            _ => m.float_flag("eta", p.eta),
        }
    }

    fn finish(self) -> Map<String, Value> {
        let mut out = Map::new();
        out.insert("command".into(), self.command.into());
        out.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        out.extend(self.fields);
        out.insert("args".into(), self.args.into());
        out
    }
}

struct Chain {
    params: ChainParams,
    regime: Regime,
}

impl Chain {
    fn resolve(args: &ChainArgs) -> Result<Self, CliError> {
        let dispersion = if args.linearized {
            Dispersion::Linearized
        } else {
            Dispersion::Exact
        };
        let base = ChainParams::new(args.n, args.alpha)
            .with_pin_ratio(args.pin_ratio)
            .with_dispersion(dispersion);
        let (params, regime) = if args.classical {
            let eta_cl = args
                .eta_cl
                .expect("clap enforces --eta-cl with --classical");
            (base, Regime::Classical { eta_cl })
        } else {
            let eta = match (args.eta, args.eta_cl) {
                (Some(eta), _) => eta,
                (None, Some(eta_cl)) => {
                    if !(args.alpha > 0.0) {
                        return Err(usage(
                            "--eta-cl needs --alpha > 0 unless --classical is given",
                        ));
                    }
                    eta_cl / args.alpha
                }
                (None, None) => 0.0,
            };
            let params = base.with_eta(eta);
            (params, Regime::quantum(&params))
        };
        params.validate().map_err(usage)?;
        regime.validate().map_err(usage)?;
        Ok(Self { params, regime })
    }

    fn is_rigid(&self) -> bool {
        match self.regime {
            Regime::Classical { eta_cl } => eta_cl == 0.0,
            _ => self.params.alpha == 0.0,
        }
    }
}

fn method_pair(
    method: Method,
    params: &ChainParams,
) -> Result<(PairMethod, StructureMethod), CliError> {
    match method {
        Method::ExactPair if params.n_atoms > PAIR_EXACT_MAX => Err(usage(format!(
            "--method exact-pair supports N <= {PAIR_EXACT_MAX}, got N = {}; use --method bulk",
            params.n_atoms
        ))),
        Method::ExactPair => Ok((PairMethod::ExactMode, StructureMethod::ExactPair)),
        Method::Bulk => Ok((PairMethod::BulkApprox, StructureMethod::BulkApprox)),
    }
}

fn sites(n: usize) -> Column {
    Column::Int((1..=n as i64).collect())
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Modes(args) => modes(args),
        Command::Fluct(args) => fluct(args),
        Command::Pairfluct {
            chain,
            reference,
            method,
        } => pairfluct(chain, *reference, *method),
        Command::Density {
            chain,
            x_min,
            x_max,
            x_steps,
        } => density(chain, *x_min, *x_max, *x_steps),
        Command::Sq {
            chain,
            method,
            q_min,
            q_max,
            q_steps,
            refine,
            refine_width,
        } => sq(
            chain,
            *method,
            *q_min,
            *q_max,
            *q_steps,
            *refine,
            *refine_width,
        ),
        Command::Bragg { alpha, nu } => bragg(*alpha, nu),
        Command::Moessbauer { chain, qa } => moessbauer(chain, *qa),
        Command::Crossover {
            eta_min,
            eta_max,
            eta_steps,
        } => crossover(*eta_min, *eta_max, *eta_steps),
        Command::Classify { d, regime } => classify(*d, *regime),
        Command::AlphaFromSi { c, a, nucleons } => alpha_si(*c, *a, *nucleons),
    }
}

fn modes(args: &ChainArgs) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    let m = mode_set(&chain.params).map_err(compute)?;
    let table = Table::new()
        .with("j", sites(m.len()))
        .with("k_tilde", Column::Float(m.k_tilde))
        .with("omega_sq", Column::Float(m.omega_sq))
        .with("omega_over_omega_s", Column::Float(m.omega_ratio));
    let meta = Meta::new("modes")
        .chain(&chain)
        .field("mode_norm", m.norm)
        .finish();
    Ok(Report { table, meta })
}

fn fluct(args: &ChainArgs) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    let profile = fluctuation_profile(&chain.params, &chain.regime).map_err(compute)?;
    let table = Table::new()
        .with("n", sites(profile.len()))
        .with("u2_over_a2", Column::Float(profile.values));
    Ok(Report {
        table,
        meta: Meta::new("fluct").chain(&chain).finish(),
    })
}

fn pairfluct(
    args: &ChainArgs,
    reference: Option<usize>,
    method: Method,
) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    let size = chain.params.n_atoms;
    let (pair_method, _) = method_pair(method, &chain.params)?;
    if let Some(r) = reference {
        if r == 0 || r > size {
            return Err(usage(format!("--ref must lie in 1..={size}, got {r}")));
        }
    }
    let pairs = pair_variance_matrix(&chain.params, &chain.regime, pair_method).map_err(compute)?;
    let table = match reference {
        Some(r) => Table::new().with("l", sites(size)).with(
            "d_over_a2",
            Column::Float((1..=size).map(|l| pairs.get(r, l)).collect()),
        ),
        None => {
            let (mut ns, mut ls, mut ds) = (Vec::new(), Vec::new(), Vec::new());
            for n in 1..=size {
                for l in 1..=n {
                    ns.push(n as i64);
                    ls.push(l as i64);
                    ds.push(pairs.get(n, l));
                }
            }
            Table::new()
                .with("n", Column::Int(ns))
                .with("l", Column::Int(ls))
                .with("d_over_a2", Column::Float(ds))
        }
    };
    let mut meta = Meta::new("pairfluct")
        .chain(&chain)
        .field("method", pair_method_label(pair_method))
        .flag("method", method.flag());
    if let Some(r) = reference {
        meta = meta.field("ref", r).flag("ref", r);
    }
    Ok(Report {
        table,
        meta: meta.finish(),
    })
}

fn pair_method_label(m: PairMethod) -> &'static str {
    match m {
        PairMethod::ExactMode => "exact_mode",
        PairMethod::BulkApprox => "bulk_approx",
    }
}

fn density(
    args: &ChainArgs,
    x_min: Option<f64>,
    x_max: Option<f64>,
    x_steps: Option<usize>,
) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    if chain.is_rigid() {
        return Err(usage(
            "the density of a chain without fluctuations is a sum of delta functions",
        ));
    }
    let lo = x_min.unwrap_or(0.0);
    let hi = x_max.unwrap_or(chain.params.n_atoms as f64 + 1.0);
    let steps = x_steps.unwrap_or_else(|| (10.0 * (hi - lo)).round().max(1.0) as usize + 1);
    let grid = uniform_grid(lo, hi, steps).map_err(usage)?;
    let curve = density_profile(&chain.params, &chain.regime, &grid).map_err(compute)?;
    let table = Table::new()
        .with("x_over_a", Column::Float(curve.xs().to_vec()))
        .with("rho_times_a", Column::Float(curve.ys().to_vec()));
    let meta = Meta::new("density")
        .chain(&chain)
        .field("grid", json!({"x_min": lo, "x_max": hi, "x_steps": steps}))
        .float_flag("x-min", lo)
        .float_flag("x-max", hi)
        .flag("x-steps", steps)
        .finish();
    Ok(Report { table, meta })
}

fn sq(
    args: &ChainArgs,
    method: Method,
    q_min: Option<f64>,
    q_max: f64,
    q_steps: usize,
    refine: usize,
    refine_width: f64,
) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    let (_, structure_method) = method_pair(method, &chain.params)?;
    if q_steps == 0 {
        return Err(usage("--q-steps must be at least 1"));
    }
    let lo = q_min.unwrap_or(q_max / q_steps as f64);
    let base = uniform_grid(lo, q_max, q_steps).map_err(usage)?;
    let offsets = if refine > 0 {
        geometric_offsets(2.0 * PI / chain.params.n_atoms as f64, refine_width, refine)
            .map_err(usage)?
    } else {
        Vec::new()
    };
    let grid = bragg_point_grid(&base, lo, q_max, &offsets);

    let sf =
        StructureFactor::new(&chain.params, &chain.regime, structure_method).map_err(compute)?;
    let curve = sf
        .curve(&grid, CurveMeta::new("qa", "s"))
        .map_err(compute)?;
    let table = Table::new()
        .with("qa", Column::Float(curve.xs().to_vec()))
        .with("s", Column::Float(curve.ys().to_vec()));
    let meta = Meta::new("sq")
        .chain(&chain)
        .field("method", structure_method.label())
        .field(
            "grid",
            json!({
                "q_min": lo,
                "q_max": q_max,
                "q_steps": q_steps,
                "refine": refine,
                "refine_width": refine_width,
                "points": grid.len(),
            }),
        )
        .flag("method", method.flag())
        .float_flag("q-min", lo)
        .float_flag("q-max", q_max)
        .flag("q-steps", q_steps)
        .flag("refine", refine)
        .float_flag("refine-width", refine_width)
        .finish();
    Ok(Report { table, meta })
}

fn bragg(alpha: f64, nus: &[i64]) -> Result<Report, CliError> {
    let rows = nus
        .iter()
        .map(|&nu| bragg_analysis(alpha, nu))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let table = Table::new()
        .with("nu", Column::Int(rows.iter().map(|r| r.nu).collect()))
        .with("beta", Column::Float(rows.iter().map(|r| r.beta).collect()))
        .with(
            "divergent",
            Column::Bool(rows.iter().map(|r| r.divergent).collect()),
        )
        .with(
            "n_scaling_exponent",
            Column::OptFloat(rows.iter().map(|r| r.n_scaling_exponent).collect()),
        )
        .with(
            "shape_exponent",
            Column::OptFloat(rows.iter().map(|r| r.shape_exponent).collect()),
        );
    let nu_list = nus.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let meta = Meta::new("bragg")
        .field("alpha", alpha)
        .field("nu", nus.to_vec())
        .float_flag("alpha", alpha)
        .flag("nu", nu_list)
        .finish();
    Ok(Report { table, meta })
}

fn moessbauer(args: &ChainArgs, qa: f64) -> Result<Report, CliError> {
    let chain = Chain::resolve(args)?;
    if chain.regime != Regime::QuantumZeroT {
        return Err(usage(
            "moessbauer is defined at zero temperature; drop --eta/--eta-cl/--classical",
        ));
    }
    if !qa.is_finite() {
        return Err(usage(format!("--qa must be finite, got {qa}")));
    }
    let curve = moessbauer_profile(&chain.params, qa).map_err(compute)?;
    let table = Table::new()
        .with("l", sites(curve.len()))
        .with("p0", Column::Float(curve.ys().to_vec()));
    let meta = Meta::new("moessbauer")
        .chain(&chain)
        .field("qa", qa)
        .float_flag("qa", qa)
        .finish();
    Ok(Report { table, meta })
}

fn crossover(eta_min: f64, eta_max: f64, eta_steps: usize) -> Result<Report, CliError> {
    if !(eta_min >= 0.0) {
        return Err(usage(format!("--eta-min must be >= 0, got {eta_min}")));
    }
    let grid = uniform_grid(eta_min, eta_max, eta_steps).map_err(usage)?;
    let values = grid.iter().map(|&e| oscillator_variance(e)).collect();
    let table = Table::new()
        .with("eta", Column::Float(grid))
        .with("x2_over_sigma2", Column::Float(values));
    let meta = Meta::new("crossover")
        .field(
            "grid",
            json!({"eta_min": eta_min, "eta_max": eta_max, "eta_steps": eta_steps}),
        )
        .float_flag("eta-min", eta_min)
        .float_flag("eta-max", eta_max)
        .flag("eta-steps", eta_steps)
        .finish();
    Ok(Report { table, meta })
}

fn classify(d: u32, regime: OrderRegime) -> Result<Report, CliError> {
    let (kind, name) = match regime {
        OrderRegime::Thermal => (FluctuationKind::ThermalClassical, "thermal"),
        OrderRegime::Quantum => (FluctuationKind::QuantumZeroT, "quantum"),
    };
    let order = order_classification(d, kind).map_err(usage)?;
    let table = Table::new()
        .with("d", Column::Int(vec![d as i64]))
        .with("regime", Column::Text(vec![name.to_string()]))
        .with("order", Column::Text(vec![order.name().to_string()]));
    let meta = Meta::new("classify")
        .field("d", d)
        .field("regime", name)
        .flag("d", d)
        .flag("regime", name)
        .finish();
    Ok(Report { table, meta })
}

fn alpha_si(c: f64, a: f64, nucleons: f64) -> Result<Report, CliError> {
    let alpha = alpha_from_nucleons(c, a, nucleons).map_err(usage)?;
    let table = Table::new().with("alpha", Column::Float(vec![alpha]));
    let meta = Meta::new("alpha-from-si")
        .field("c", c)
        .field("a", a)
        .field("A", nucleons)
        .float_flag("c", c)
        .float_flag("a", a)
        .float_flag("A", nucleons)
        .finish();
    Ok(Report { table, meta })
}
