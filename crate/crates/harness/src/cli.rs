//! The `chromatic` command line tool.

use std::io::Write;
use std::path::{Path, PathBuf};

use chromatic_pac::bounds::{
    auc_bound, auc_linear_bound, bayes_risk_factor, beta_mixing_bound, chromatic_bound_i, chromatic_bound_ii,
    generalized_chromatic_bound, generic_pacbayes_budget, iid_bound, phi_mixing_bound, ranking_bound, subgraph_bound,
    BoundResult, SubgraphCandidate,
};
use chromatic_pac::covers::{
    beta_block_decomposition, bipartite_ranking_cover, bipartite_ranking_graph, iid_cover, ranking_dependency_graph,
    ustat_ranking_cover, BipartiteRankingShape,
};
use chromatic_pac::depgraph::{
    chi_estimates, fractional_chromatic_exact, validate_cover, CoverElement, CoverStats, DependencyGraph,
    FractionalCover,
};
use chromatic_pac::gibbs::{
    empirical_auc_risk, gibbs_error_auc, gibbs_error_binary, mc_gibbs_error, moment_comparison, train_linear,
    BipartiteGaussianGenerator, GaussianLinearPosterior, IidGaussianGenerator, LinearScorer, MomentComparison, TieMode,
};
use chromatic_pac::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::config::KeyValues;
use crate::data::{build_pairs, load_dataset};
use crate::sweep::{run_sweep, to_csv, to_json_lines, SweepConfig, SweepRecord};
use crate::validity::{run_validity, ValidityConfig, ValidityReport};
use crate::HarnessError;

#[derive(Debug, Parser)]
#[command(
    name = "chromatic",
    version,
    about = "PAC-Bayes bounds for dependent data via fractional covers"
)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// How tied positive/negative scores count (strict or half).
    #[arg(long, global = true)]
    pub tie_mode: Option<TieMode>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional chromatic number and its bounds for a graph file.
    Chi {
        graph: PathBuf,
        /// Only the exact value.
        #[arg(long, conflicts_with = "bounds")]
        exact: bool,
        /// Only the clique / coloring / degree bounds.
        #[arg(long)]
        bounds: bool,
    },
    /// Build a standard cover: `iid <m>`, `auc <lpos> <lneg>`, `ustat <l>`,
    /// `beta-blocks <m> <a>`.
    Cover {
        family: CoverFamily,
        #[arg(required = true)]
        params: Vec<usize>,
        /// Check the cover against its dependency graph.
        #[arg(long)]
        validate: bool,
    },
    /// Evaluate one bound.
    Bound {
        #[command(subcommand)]
        bound: BoundCommand,
    },
    /// Gibbs risks of a Gaussian posterior around a linear scorer.
    Gibbs(GibbsArgs),
    /// Bound and test error across a grid of C values.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Write the curves as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo violation rate of a bound.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Central moments of the Gibbs risk on the full sample and on each
    /// cover element.
    Moments(MomentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverFamily {
    Iid,
    Auc,
    Ustat,
    BetaBlocks,
}

#[derive(Debug, Clone, Args)]
pub struct Budget {
    /// KL divergence between posterior and prior.
    #[arg(long, default_value_t = 0.0)]
    pub kl: f64,
    #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
    pub delta: f64,
    /// Empirical Gibbs risk.
    #[arg(long, default_value_t = 0.0)]
    pub ehat: f64,
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// iid sample of size m.
    Iid {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Per-element KL terms over a cover given by its element weights.
    ChromaticI {
        #[arg(long)]
        m: usize,
        /// Element weights, e.g. `1/2,1/2,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<Rational>,
        /// Element sizes, used for the reported proportions.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// One KL divergence per element.
        #[arg(long = "kl", value_delimiter = ',', required = true)]
        kls: Vec<f64>,
        #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        ehat: f64,
    },
    /// Single KL term with a (fractional) chromatic number.
    ChromaticIi {
        #[arg(long)]
        m: usize,
        /// For example `5/2`.
        #[arg(long)]
        chi: Rational,
        #[command(flatten)]
        budget: Budget,
    },
    /// Best of several induced subgraphs with k examples removed.
    Subgraph {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        chi: Vec<Rational>,
        /// One empirical risk per candidate.
        #[arg(long = "ehat", value_delimiter = ',', required = true)]
        ehats: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        kl: f64,
        #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
        delta: f64,
    },
    /// Ranking risk over all ordered pairs of l examples.
    Ranking {
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Bipartite misranking risk.
    Auc {
        #[arg(long)]
        lpos: usize,
        #[arg(long)]
        lneg: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Bipartite risk of a Gaussian posterior on linear scorers.
    AucLinear {
        #[arg(long)]
        lmin: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        ehat: f64,
    },
    /// Stationary β-mixing sequence, blocks of length a.
    BetaMixing {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        a: usize,
        /// β(a)
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[command(flatten)]
        budget: Budget,
    },
    /// `(K + ln(αβ/δ)) / (β - 1)` for a concentration constant pair.
    Generic {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        kl: f64,
        #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
        delta: f64,
    },
    /// Losses in [0, M] with a chromatic number.
    Generalized {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        chi: Rational,
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        #[command(flatten)]
        budget: Budget,
    },
    /// Stationary φ-mixing sequence.
    PhiMixing {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        /// φ(1), φ(2), …
        #[arg(long, value_delimiter = ',')]
        phi: Vec<f64>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Bayes classifier risk from a Gibbs risk.
    Bayes {
        #[arg(long)]
        gibbs: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GibbsArgs {
    pub dataset: PathBuf,
    /// Weight vector, comma or whitespace separated.
    #[arg(long, conflicts_with = "train", required_unless_present = "train")]
    pub w_file: Option<PathBuf>,
    /// Train the scorer on the dataset.
    #[arg(long)]
    pub train: bool,
    /// Soft-margin parameter for training; λ = 1/(C m).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = crate::sweep::DEFAULT_EPOCHS)]
    pub epochs: usize,
    /// Posterior scale; defaults to the norm of w.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = crate::sweep::DEFAULT_DELTA)]
    pub delta: f64,
    /// Also estimate the Gibbs error with this many posterior draws.
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of positive-negative pairs.
    #[arg(long)]
    pub pair_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentFamily {
    Auc,
    Iid,
}

#[derive(Debug, Clone, Args)]
pub struct MomentArgs {
    #[arg(long, value_enum, default_value_t = MomentFamily::Auc)]
    pub family: MomentFamily,
    #[arg(long, default_value_t = 6)]
    pub lpos: usize,
    #[arg(long, default_value_t = 6)]
    pub lneg: usize,
    /// Sample size for the iid family.
    #[arg(long, default_value_t = 12)]
    pub m: usize,
    /// Moment order.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub pos_mean: f64,
    #[arg(long, default_value_t = 0.0)]
    pub neg_mean: f64,
    /// Class mean magnitude for the iid family.
    #[arg(long, default_value_t = 0.5)]
    pub mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub std: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Failed(HarnessError),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::Failed(e)
    }
}

type Out<'a> = &'a mut dyn Write;

fn emit(out: Out, text: impl AsRef<str>) -> Result<(), HarnessError> {
    out.write_all(text.as_ref().as_bytes())
        .map_err(|e| HarnessError::io("<stdout>", e))
}

fn emit_json(out: Out, value: &impl Serialize) -> Result<(), HarnessError> {
    emit(out, serde_json::to_string_pretty(value)? + "\n")
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out`.
pub fn run<I, T>(args: I, out: Out) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    execute(&cli, out).map_err(CliError::Failed)
}

/// Exit status: 0 on success, 2 on usage errors, 1 on failures. Errors go to
/// standard error.
pub fn main_with_args<I, T>(args: I, out: Out) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match run(args, out) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                eprint!("{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            code
        }
        Err(CliError::Failed(e)) => {
            eprintln!("error [{}]: {e}", e.component());
            1
        }
    }
}

pub fn execute(cli: &Cli, out: Out) -> Result<(), HarnessError> {
    match &cli.command {
        Command::Chi { graph, exact, bounds } => chi(graph, *exact, *bounds, cli.json, out),
        Command::Cover {
            family,
            params,
            validate,
        } => cover(*family, params, *validate, cli.json, out),
        Command::Bound { bound } => bound_command(bound, cli.json, out),
        Command::Gibbs(args) => gibbs(args, cli.tie_mode.unwrap_or_default(), cli.json, out),
        Command::Sweep { config, csv } => sweep(config, csv.as_deref(), cli.tie_mode, cli.json, out),
        Command::Validate { config } => validate(config, cli.json, out),
        Command::Moments(args) => moments(args, cli.json, out),
    }
}

fn chi(path: &Path, exact_only: bool, bounds_only: bool, json: bool, out: Out) -> Result<(), HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let graph = DependencyGraph::parse(&text)?;
    if exact_only {
        let fc = fractional_chromatic_exact(&graph)?;
        return if json {
            emit_json(
                out,
                &json!({ "chi_star": fc.chi_star.to_string(), "certificate": cover_json(&fc.cover) }),
            )
        } else {
            emit(out, format!("chi_star = {}\n", fc.chi_star))
        };
    }
    let est = chi_estimates(&graph);
    if json {
        let mut value = json!({
            "vertices": graph.vertex_count(),
            "edges": graph.edges().len(),
            "clique": est.clique_lower,
            "clique_exact": est.clique_exact,
            "greedy_colors": est.chi_upper,
            "delta_plus_one": est.delta_plus_one,
        });
        if !bounds_only {
            value["chi_star"] = json!(est.chi_star.map(|c| c.to_string()));
        }
        return emit_json(out, &value);
    }
    let mut text = String::new();
    if !bounds_only {
        match est.chi_star {
            Some(c) => text += &format!("chi_star = {c}\n"),
            None => text += "chi_star = (graph too large for the exact solver)\n",
        }
    }
    let exactness = if est.clique_exact {
        "exact"
    } else {
        "greedy lower bound"
    };
    text += &format!("clique = {} ({exactness})\n", est.clique_lower);
    text += &format!("greedy_colors = {}\n", est.chi_upper);
    text += &format!("delta_plus_one = {}\n", est.delta_plus_one);
    emit(out, text)
}

fn cover_json(cover: &FractionalCover) -> serde_json::Value {
    let elements: Vec<_> = cover
        .elements()
        .iter()
        .map(|e| json!({ "weight": e.weight.to_string(), "vertices": e.vertices }))
        .collect();
    json!({ "graph_size": cover.graph_size(), "weight": cover.weight().to_string(), "elements": elements })
}

fn expect_params(family: CoverFamily, params: &[usize], n: usize, usage: &str) -> Result<(), HarnessError> {
    if params.len() == n {
        Ok(())
    } else {
        Err(HarnessError::Config(format!(
            "cover {}: expected {usage}",
            family
                .to_possible_value()
                .map_or("?".into(), |v| v.get_name().to_string())
        )))
    }
}

fn cover(family: CoverFamily, params: &[usize], validate: bool, json: bool, out: Out) -> Result<(), HarnessError> {
    let (graph, cover) = match family {
        CoverFamily::Iid => {
            expect_params(family, params, 1, "<m>")?;
            iid_cover(params[0])?
        }
        CoverFamily::Auc => {
            expect_params(family, params, 2, "<lpos> <lneg>")?;
            let shape = BipartiteRankingShape::new(params[0], params[1])?;
            (bipartite_ranking_graph(shape)?, bipartite_ranking_cover(shape)?)
        }
        CoverFamily::Ustat => {
            expect_params(family, params, 1, "<l>")?;
            (ranking_dependency_graph(params[0])?, ustat_ranking_cover(params[0])?)
        }
        CoverFamily::BetaBlocks => {
            expect_params(family, params, 2, "<m> <a>")?;
            let blocks = beta_block_decomposition(params[0], params[1])?;
            (blocks.surrogate_graph()?, blocks.surrogate_cover()?)
        }
    };
    if validate {
        let stats = validate_cover(&graph, &cover)?;
        return if json {
            emit_json(
                out,
                &json!({ "ok": true, "omega": stats.omega_exact.to_string(), "alpha": stats.alpha, "pi": stats.pi }),
            )
        } else {
            emit(out, format!("ok, omega = {}\n", stats.omega_exact))
        };
    }
    if json {
        return emit_json(out, &cover_json(&cover));
    }
    let mut text = format!("vertices = {}\nelements = {}\n", cover.graph_size(), cover.len());
    for e in cover.elements() {
        let vs: Vec<String> = e.vertices.iter().map(usize::to_string).collect();
        text += &format!("{}: {}\n", e.weight, vs.join(" "));
    }
    text += &format!("omega = {}\n", cover.weight());
    emit(out, text)
}

fn bound_command(cmd: &BoundCommand, json: bool, out: Out) -> Result<(), HarnessError> {
    let result = match cmd {
        BoundCommand::Iid { m, budget: b } => iid_bound(*m, b.kl, b.delta, b.ehat)?,
        BoundCommand::ChromaticI {
            m,
            weights,
            sizes,
            kls,
            delta,
            ehat,
        } => {
            let elements = weights
                .iter()
                .map(|&w| CoverElement {
                    vertices: vec![0],
                    weight: w,
                })
                .collect::<Vec<_>>();
            let omega_exact = weights.iter().fold(Rational::from_integer(0), |acc, &w| acc + w);
            if elements.is_empty() || omega_exact <= Rational::from_integer(0) {
                return Err(HarnessError::Config("weights must be positive".into()));
            }
            if !sizes.is_empty() && sizes.len() != weights.len() {
                return Err(HarnessError::Config("need one size per weight".into()));
            }
            let to_f = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
            let omega = to_f(&omega_exact);
            let stats = CoverStats {
                omega,
                omega_exact,
                alpha: weights.iter().map(|w| to_f(w) / omega).collect(),
                pi: weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| to_f(w) * sizes.get(j).copied().unwrap_or(0) as f64 / *m as f64)
                    .collect(),
            };
            chromatic_bound_i(&stats, kls, *m, *delta, *ehat)?
        }
        BoundCommand::ChromaticIi { m, chi, budget: b } => chromatic_bound_ii(*m, *chi, b.kl, b.delta, b.ehat)?,
        BoundCommand::Subgraph {
            m,
            k,
            chi,
            ehats,
            kl,
            delta,
        } => {
            if chi.len() != ehats.len() {
                return Err(HarnessError::Config("need one empirical risk per chi value".into()));
            }
            let candidates: Vec<SubgraphCandidate> = chi
                .iter()
                .zip(ehats)
                .map(|(&c, &e)| SubgraphCandidate {
                    size: m.saturating_sub(*k),
                    chi_star: c,
                    e_hat: e,
                })
                .collect();
            subgraph_bound(&candidates, *m, *k, *kl, *delta)?
        }
        BoundCommand::Ranking { l, budget: b } => ranking_bound(*l, b.kl, b.delta, b.ehat)?,
        BoundCommand::Auc { lpos, lneg, budget: b } => auc_bound(*lpos, *lneg, b.kl, b.delta, b.ehat)?,
        BoundCommand::AucLinear { lmin, mu, delta, ehat } => auc_linear_bound(*lmin, *mu, *delta, *ehat)?,
        BoundCommand::BetaMixing { m, a, beta, budget: b } => beta_mixing_bound(*m, *a, *beta, b.kl, b.delta, b.ehat)?,
        BoundCommand::Generalized {
            m,
            chi,
            range,
            budget: b,
        } => generalized_chromatic_bound(*m, *chi, *range, b.kl, b.delta, b.ehat)?,
        BoundCommand::PhiMixing {
            m,
            range,
            phi,
            budget: b,
        } => phi_mixing_bound(*m, *range, phi, b.kl, b.delta, b.ehat)?,
        BoundCommand::Generic { alpha, beta, kl, delta } => {
            let budget = generic_pacbayes_budget(*alpha, *beta, *kl, *delta)?;
            return if json {
                emit_json(out, &json!({ "budget": budget }))
            } else {
                emit(out, format!("budget = {budget}\n"))
            };
        }
        BoundCommand::Bayes { gibbs } => {
            if !(0.0..=1.0).contains(gibbs) {
                return Err(HarnessError::Config(format!("gibbs risk {gibbs} is outside [0, 1]")));
            }
            let bayes = bayes_risk_factor(*gibbs);
            return if json {
                emit_json(out, &json!({ "gibbs": gibbs, "bayes_bound": bayes }))
            } else {
                emit(out, format!("bayes_bound = {bayes}\n"))
            };
        }
    };
    if json {
        emit_json(out, &bound_json(&result))
    } else {
        emit(out, bound_text(&result))
    }
}

pub fn bound_json(r: &BoundResult) -> serde_json::Value {
    json!({
        "ehat": r.empirical_gibbs,
        "budget": r.kl_budget,
        "budget_kind": r.budget_kind,
        "bound_kl": r.risk_bound_kl,
        "bound_pinsker": r.risk_bound_pinsker,
        "lower": r.risk_lower,
        "delta": r.delta,
        "effective_m": r.effective_m,
        "chi_star": r.chi_star_used.map(|c| c.to_string()),
        "vacuous": r.vacuous,
    })
}

pub fn bound_text(r: &BoundResult) -> String {
    let mut text = format!("ehat = {}\nbudget = {}\n", r.empirical_gibbs, r.kl_budget);
    text += &format!(
        "bound_kl = {}\nbound_pinsker = {}\n",
        r.risk_bound_kl, r.risk_bound_pinsker
    );
    if let Some(lower) = r.risk_lower {
        text += &format!("lower = {lower}\n");
    }
    text += &format!("effective_m = {}\n", r.effective_m);
    if let Some(c) = r.chi_star_used {
        text += &format!("chi_star = {c}\n");
    }
    text += &format!("vacuous = {}\n", r.vacuous);
    text
}

fn read_weights(path: &Path) -> Result<Vec<f64>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| HarnessError::Parse {
                line: 0,
                message: format!("{}: {s:?} is not a number", path.display()),
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct GibbsReport {
    examples: usize,
    lpos: usize,
    lneg: usize,
    mu: f64,
    kl: f64,
    gibbs_error: f64,
    gibbs_auc_error: f64,
    scorer_auc_error: f64,
    iid_bound: serde_json::Value,
    auc_bound: serde_json::Value,
    mc_error: Option<f64>,
    mc_std_error: Option<f64>,
}

fn gibbs(args: &GibbsArgs, tie_mode: TieMode, json: bool, out: Out) -> Result<(), HarnessError> {
    let data = load_dataset(&args.dataset)?;
    let scorer = match &args.w_file {
        Some(path) => LinearScorer::new(read_weights(path)?)?,
        None => {
            if args.c.is_nan() || args.c <= 0.0 {
                return Err(HarnessError::Config(format!("C = {} must be positive", args.c)));
            }
            train_linear(&data, 1.0 / (args.c * data.len() as f64), args.epochs, args.seed)?
        }
    };
    let post = match args.mu {
        Some(mu) => GaussianLinearPosterior::new(scorer.weights(), mu)?,
        None => GaussianLinearPosterior::from_weights(scorer.weights())?,
    };
    let pairs = build_pairs(&data, args.pair_cap, args.seed)?;
    let shape = pairs.shape();
    let gibbs_error = gibbs_error_binary(&post, &data)?;
    let gibbs_auc_error = gibbs_error_auc(&post, &data, &pairs)?;
    let kl = post.kl_to_prior();
    let mc = args
        .mc
        .map(|n| mc_gibbs_error(&post, &data, n, args.seed))
        .transpose()?;
    let report = GibbsReport {
        examples: data.len(),
        lpos: shape.pos_count(),
        lneg: shape.neg_count(),
        mu: post.mu(),
        kl,
        gibbs_error,
        gibbs_auc_error,
        scorer_auc_error: empirical_auc_risk(&scorer, &data, &pairs, tie_mode)?,
        iid_bound: bound_json(&iid_bound(data.len(), kl, args.delta, gibbs_error)?),
        auc_bound: bound_json(&auc_bound(
            shape.pos_count(),
            shape.neg_count(),
            kl,
            args.delta,
            gibbs_auc_error,
        )?),
        mc_error: mc.map(|m| m.rate),
        mc_std_error: mc.map(|m| m.std_error),
    };
    if json {
        return emit_json(out, &report);
    }
    let mut text = format!(
        "examples = {}\nlpos = {}\nlneg = {}\nmu = {}\nkl = {}\n",
        report.examples, report.lpos, report.lneg, report.mu, report.kl
    );
    text += &format!(
        "gibbs_error = {}\ngibbs_auc_error = {}\n",
        report.gibbs_error, report.gibbs_auc_error
    );
    text += &format!("scorer_auc_error = {}\n", report.scorer_auc_error);
    text += &format!("iid_bound = {}\n", report.iid_bound["bound_kl"]);
    text += &format!("auc_bound = {}\n", report.auc_bound["bound_kl"]);
    if let (Some(r), Some(se)) = (report.mc_error, report.mc_std_error) {
        text += &format!("mc_error = {r} (se {se})\n");
    }
    emit(out, text)
}

pub fn sweep_table(records: &[SweepRecord]) -> String {
    let mut text = format!(
        "{:>10} {:>10} {:>10} {:>13} {:>10} {:>6} {:>6} {:>10}\n",
        "C", "ehat", "bound_kl", "bound_pinsker", "test_err", "lpos", "lneg", "mu"
    );
    for r in records {
        let mark = match (r.best_bound, r.best_test) {
            (true, true) => "  <- best bound, best test",
            (true, false) => "  <- best bound",
            (false, true) => "  <- best test",
            _ => "",
        };
        text += &format!(
            "{:>10.4e} {:>10.6} {:>10.6} {:>13.6} {:>10.6} {:>6} {:>6} {:>10.4}{mark}\n",
            r.c, r.ehat, r.bound_kl, r.bound_pinsker, r.test_err, r.lpos, r.lneg, r.mu
        );
    }
    text
}

fn sweep(
    config_path: &Path,
    csv: Option<&Path>,
    tie_mode: Option<TieMode>,
    json: bool,
    out: Out,
) -> Result<(), HarnessError> {
    let mut config = SweepConfig::from_key_values(&KeyValues::load(config_path)?)?;
    if let Some(t) = tie_mode {
        config.settings.tie_mode = t;
    }
    if let Some(path) = csv {
        config.output = Some(path.to_path_buf());
    }
    let records = run_sweep(&config)?;
    if json {
        emit(out, to_json_lines(&records)?)
    } else if config.output.is_none() {
        emit(out, to_csv(&records)?)
    } else {
        emit(out, sweep_table(&records))
    }
}

pub fn validity_text(r: &ValidityReport) -> String {
    let mut text = format!("mode = {:?}\nl = {}\n", r.mode, r.l).to_lowercase();
    if let (Some(p), Some(n)) = (r.lpos, r.lneg) {
        text += &format!("lpos = {p}\nlneg = {n}\n");
    }
    text += &format!("draws = {}\ndelta = {}\nkl = {}\n", r.n_draws, r.delta, r.kl);
    text += &format!("reference_risk = {} (se {})\n", r.reference_risk, r.reference_std_error);
    text += &format!("mean_empirical = {}\nmean_bound = {}\n", r.mean_empirical, r.mean_bound);
    text += &format!("violations = {}\nviolation_rate = {}\n", r.violations, r.violation_rate);
    text += &format!(
        "tolerance = {}\nwithin_tolerance = {}\n",
        r.tolerance, r.within_tolerance
    );
    text
}

fn validate(config_path: &Path, json: bool, out: Out) -> Result<(), HarnessError> {
    let config = ValidityConfig::from_key_values(&KeyValues::load(config_path)?)?;
    let report = run_validity(&config)?;
    if json {
        emit_json(out, &report)
    } else {
        emit(out, validity_text(&report))
    }
}

/// Whether the full-sample moment is at most every per-element moment plus
/// three standard errors of the difference.
pub fn moment_ordering_holds(cmp: &MomentComparison) -> bool {
    cmp.per_element.iter().all(|e| {
        let se = cmp.full.std_error.hypot(e.std_error);
        cmp.full.value <= e.value + 3.0 * se
    })
}

fn moments(args: &MomentArgs, json: bool, out: Out) -> Result<(), HarnessError> {
    let post = GaussianLinearPosterior::new(&[1.0], args.mu)?;
    let cmp = match args.family {
        MomentFamily::Auc => {
            let shape = BipartiteRankingShape::new(args.lpos, args.lneg)?;
            let generator = BipartiteGaussianGenerator {
                shape,
                pos_mean: args.pos_mean,
                neg_mean: args.neg_mean,
                std: args.std,
            };
            let graph = bipartite_ranking_graph(shape)?;
            let cover = bipartite_ranking_cover(shape)?;
            moment_comparison(&post, &graph, &cover, &generator, args.r, args.draws, args.seed)?
        }
        MomentFamily::Iid => {
            let (graph, cover) = iid_cover(args.m)?;
            let generator = IidGaussianGenerator {
                m: args.m,
                mean: args.mean,
                std: args.std,
            };
            moment_comparison(&post, &graph, &cover, &generator, args.r, args.draws, args.seed)?
        }
    };
    let holds = moment_ordering_holds(&cmp);
    if json {
        return emit_json(out, &json!({ "r": args.r, "comparison": cmp, "ordering_holds": holds }));
    }
    let mut text = format!("r = {}\ne_q = {}\n", args.r, cmp.e_q);
    text += &format!("full = {} (se {})\n", cmp.full.value, cmp.full.std_error);
    for (j, e) in cmp.per_element.iter().enumerate() {
        text += &format!("element {j} = {} (se {})\n", e.value, e.std_error);
    }
    text += &format!("ordering_holds = {holds}\n");
    emit(out, text)
}
