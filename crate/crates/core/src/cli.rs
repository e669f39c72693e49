//! Command-line front end.
//!
//! Exit codes: 0 success (or invariants agree), 1 graphs distinguished or
//! hypotheses not met, 2 input or parameter error, 3 state cap exceeded.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::dynamics::{
    analyze_periodic_word, count_tables_dp_with_cap, neutral_zeta_product, periodic_points,
    DEFAULT_STATE_CAP,
};
use crate::error::{Error, Result};
use crate::families::{
    classify, decide_conjugacy_in_family, horizon_for_classification, verify_lemma_formulas,
    CanonicalParams, ConjugacyVerdict,
};
use crate::graph::{contracting_forest, validate_graph, DirectedMultigraph};
use crate::invariants::{compare, fingerprint_from, Verdict};
use crate::series::zeta_series;

pub const THREADS_ENV: &str = "MDSHIFT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mdshift",
    version,
    about = "Markov-Dyck shifts of finite directed graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Emit versioned JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Maximum number of distinct reachable elements per word length.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the standing hypotheses.
    Validate {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Contract the single-incoming trees.
    Contract {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the invariant fingerprint.
    Invariants {
        graph: PathBuf,
        /// Truncation of all count vectors and series.
        #[arg(short = 'n', long, default_value_t = 10, value_parser = at_least_two)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two fingerprints, or decide conjugacy within the families.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(short = 'n', long, default_value_t = 10, value_parser = at_least_two)]
        n_max: usize,
        /// Decide conjugacy through the canonical families instead.
        #[arg(long)]
        family: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Report every canonical family the graph belongs to.
    Classify {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated zeta function of the periodic points.
    Zeta {
        graph: PathBuf,
        /// Restrict to neutral points and compare with the circular-code product.
        #[arg(long)]
        neutral: bool,
        #[arg(short = 'd', long, default_value_t = 10, value_parser = at_least_two)]
        degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the closed-form counting identities against enumeration.
    VerifyLemmas {
        graph: PathBuf,
        /// Count table horizon; defaults to the smallest one that suffices.
        #[arg(short = 'n', long)]
        n_max: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// List the periodic points of period `n` (fixed by the n-th shift power).
    Enumerate {
        graph: PathBuf,
        #[arg(short = 'n', long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print a canonical model, e.g. `canonical III ell=5 m=1`.
    Canonical {
        #[arg(required = true, num_args = 1..)]
        params: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn at_least_two(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        Ok(n) => Err(format!("must be at least 2, got {n}")),
        Err(e) => Err(e.to_string()),
    }
}

/// What a command produced: text for stdout and an exit code.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) => 1,
        Error::StateCap { .. } => 3,
        _ => 2,
    }
}

fn read_graph(path: &Path) -> Result<DirectedMultigraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    DirectedMultigraph::from_json_str(&text)
}

fn pretty<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("output serialises");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { graph, common } => {
            let g = read_graph(&graph)?;
            let r = validate_graph(&g);
            Ok(Outcome {
                code: if r.standing_hypotheses_met { 0 } else { 1 },
                stdout: if common.json {
                    pretty(&json!({"schema": "mdshift.validate/1", "report": r}))
                } else {
                    format!("{r}\n")
                },
            })
        }
        Command::Contract { graph, common } => {
            let g = read_graph(&graph)?;
            let cd = contracting_forest(&g)?;
            let j = cd.to_json(&g);
            Ok(Outcome::ok(if common.json {
                pretty(&json!({"schema": "mdshift.contraction/1", "contraction": j}))
            } else {
                format!(
                    "roots=[{}] tree_edges=[{}]\ncontracted: {} vertices, {} edges\n",
                    j.roots.join(","),
                    j.tree_edges.join(","),
                    cd.contracted.vertex_count(),
                    cd.contracted.edge_count()
                )
            }))
        }
        Command::Invariants {
            graph,
            n_max,
            common,
        } => {
            let g = read_graph(&graph)?;
            let cd = contracting_forest(&g)?;
            let ct = count_tables_dp_with_cap(&g, &cd, n_max, common.state_cap)?;
            let f = fingerprint_from(&g, &cd, &ct)?;
            Ok(Outcome::ok(if common.json {
                pretty(&f)
            } else {
                format!(
                    "nu = {}\nlambda_spectrum = {}\nm_ell_sizes = {}\nneutral_fixed = {}\nxi_profile = {}\nweighted_contracted = {}\n",
                    f.nu,
                    serde_json::to_string(&f.lambda_spectrum).unwrap(),
                    serde_json::to_string(&f.m_ell_sizes).unwrap(),
                    f.neutral_fixed_vector.join(" "),
                    serde_json::to_string(&f.xi_profile).unwrap(),
                    serde_json::to_string(&f.weighted_contracted).unwrap(),
                )
            }))
        }
        Command::Compare {
            left,
            right,
            n_max,
            family,
            common,
        } => {
            let g1 = read_graph(&left)?;
            let g2 = read_graph(&right)?;
            if family {
                let v = decide_conjugacy_in_family(&g1, &g2)?;
                let code = match v {
                    ConjugacyVerdict::Conjugate { .. } => 0,
                    ConjugacyVerdict::NotConjugate { .. } => 1,
                    ConjugacyVerdict::Undecided { .. } => 0,
                };
                let stdout = if common.json {
                    pretty(&json!({"schema": "mdshift.conjugacy/1", "result": v}))
                } else {
                    match &v {
                        ConjugacyVerdict::Conjugate {
                            params,
                            isomorphism,
                        } => {
                            let map: Vec<String> = isomorphism
                                .iter()
                                .map(|(a, b)| format!("{a}->{b}"))
                                .collect();
                            format!("conjugate ({params}) via {}\n", map.join(" "))
                        }
                        ConjugacyVerdict::NotConjugate { reason } => {
                            format!("not conjugate: {reason}\n")
                        }
                        ConjugacyVerdict::Undecided { reason } => format!("undecided: {reason}\n"),
                    }
                };
                return Ok(Outcome { code, stdout });
            }
            let mut fps = Vec::new();
            for g in [&g1, &g2] {
                let cd = contracting_forest(g)?;
                let ct = count_tables_dp_with_cap(g, &cd, n_max, common.state_cap)?;
                fps.push(fingerprint_from(g, &cd, &ct)?);
            }
            let v = compare(&fps[0], &fps[1])?;
            let code = match v {
                Verdict::Distinguished { .. } => 1,
                Verdict::InvariantsAgree => 0,
            };
            let stdout = if common.json {
                pretty(&json!({"schema": "mdshift.compare/1", "truncation": n_max, "result": v}))
            } else {
                match &v {
                    Verdict::Distinguished { field, left, right } => {
                        format!("distinguished by {field}: {left} vs {right}\n")
                    }
                    Verdict::InvariantsAgree => {
                        format!("invariants agree up to n = {n_max}\n")
                    }
                }
            };
            Ok(Outcome { code, stdout })
        }
        Command::Classify { graph, common } => {
            let g = read_graph(&graph)?;
            let c = classify(&g)?;
            let matches = c.matches();
            Ok(Outcome::ok(if common.json {
                pretty(&json!({"schema": "mdshift.classification/1", "matches": matches}))
            } else if matches.is_empty() {
                "no canonical family\n".to_string()
            } else {
                matches.iter().map(|p| format!("{p}\n")).collect()
            }))
        }
        Command::Zeta {
            graph,
            neutral,
            degree,
            common,
        } => {
            let g = read_graph(&graph)?;
            let cd = contracting_forest(&g)?;
            let ct = count_tables_dp_with_cap(&g, &cd, degree, common.state_cap)?;
            let counts = if neutral {
                &ct.neutral_fixed
            } else {
                &ct.fixed_points
            };
            let z = zeta_series(&counts[1..], degree)?;
            let coeffs = z.integer_coefficients()?;
            let product = if neutral {
                let p = neutral_zeta_product(&g, degree)?;
                Some(p == z)
            } else {
                None
            };
            let coeff_strings: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            Ok(Outcome {
                code: if product == Some(false) { 1 } else { 0 },
                stdout: if common.json {
                    pretty(&json!({
                        "schema": "mdshift.zeta/1",
                        "neutral": neutral,
                        "degree": degree,
                        "coefficients": coeff_strings,
                        "equals_circular_code_product": product,
                    }))
                } else {
                    let mut s = format!("{z}\n");
                    if let Some(eq) = product {
                        s.push_str(if eq {
                            "equals the product of 1/(1 - phi_V) over the roots\n"
                        } else {
                            "DIFFERS from the product of 1/(1 - phi_V) over the roots\n"
                        });
                    }
                    s
                },
            })
        }
        Command::VerifyLemmas {
            graph,
            n_max,
            common,
        } => {
            let g = read_graph(&graph)?;
            let cd = contracting_forest(&g)?;
            let n = n_max.unwrap_or_else(|| horizon_for_classification(&g, &cd));
            let ct = count_tables_dp_with_cap(&g, &cd, n, common.state_cap)?;
            let r = verify_lemma_formulas(&g, &cd, &ct)?;
            Ok(Outcome::ok(if common.json {
                pretty(&r)
            } else {
                r.to_markdown()
            }))
        }
        Command::Enumerate { graph, n, common } => {
            let g = read_graph(&graph)?;
            if n == 0 {
                return Err(Error::InvalidParams("n must be positive".into()));
            }
            let cd = contracting_forest(&g)?;
            let mut rows = Vec::new();
            for w in periodic_points(&g, n) {
                let info = analyze_periodic_word(&w, &g, &cd)?;
                rows.push(json!({
                    "word": w.display(&g).to_string(),
                    "least_period": info.least_period,
                    "neutral_root": info.neutral_root.map(|v| g.vertex_name(v).to_string()),
                    "negative_multiplier": info.negative_multiplier.map(|(e, m)| json!({
                        "edge": g.edge_name(e),
                        "power": m,
                    })),
                }));
            }
            Ok(Outcome::ok(if common.json {
                pretty(&json!({"schema": "mdshift.enumeration/1", "n": n, "points": rows}))
            } else {
                let mut s = String::new();
                for r in &rows {
                    s.push_str(r["word"].as_str().unwrap());
                    s.push_str(&format!("  period {}", r["least_period"]));
                    if let Some(v) = r["neutral_root"].as_str() {
                        s.push_str(&format!("  neutral at {v}"));
                    }
                    if let Some(e) = r["negative_multiplier"]["edge"].as_str() {
                        s.push_str(&format!(
                            "  multiplier {e}^{}",
                            r["negative_multiplier"]["power"]
                        ));
                    }
                    s.push('\n');
                }
                s.push_str(&format!("{} points\n", rows.len()));
                s
            }))
        }
        Command::Canonical { params, common } => {
            let p: CanonicalParams = params.join(" ").parse()?;
            let g = p.build()?;
            Ok(Outcome::ok(if common.json {
                pretty(&json!({
                    "schema": "mdshift.canonical/1",
                    "params": p.to_string(),
                    "graph": g.to_spec(),
                }))
            } else {
                pretty(&g.to_spec())
            }))
        }
    }
}

/// Configures the thread pool from `MDSHIFT_THREADS`, if set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Error::InvalidParams(format!("{THREADS_ENV}={v} is not a number")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidParams(e.to_string()))
}
