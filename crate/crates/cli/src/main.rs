//! `luc`: runs the model checks, the strictification suites and the
//! interpreter, and reports one line per check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use luc_core::bang::{check_bang_splitness, check_equivalence};
use luc_core::compcat::{check_fibration_axioms, check_fullness, check_pseudo_action, check_splitness, Model, ReflAction};
use luc_core::finval::{check_lf, check_lf_with};
use luc_core::lift::stability::{check_former, check_w_square, check_w_stability, Former, Thinning, WRegime};
use luc_core::lift::weak::{certify_former, certify_ids, certify_sums};
use luc_core::lift::{BangSuite, DirectSuite};
use luc_core::mltt::harness::{agreement, soundness};
use luc_core::mltt::pool::{build, Pool, PoolConfig, SubstCase, TermCase};
use luc_core::mltt::{check, check_ctx, check_subst, check_ty, parse_file, Ctx, Decl, Interp, Module, Tm};
use luc_core::models::fixtures::{corrupted_eval, dropping_sum, loopy_id, CollapsingAction, CorruptedLift};
use luc_core::models::{by_name, FamModel, PullbackModel};
use luc_core::{Bounds, Report};

#[derive(Parser)]
#[command(name = "luc", version, about = "Local-universe strictification checks over finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Check the comprehension-category axioms of the model.
    CheckAxioms,
    /// Build the split replacement and check strict stability of its structure.
    Strictify,
    /// Typecheck and interpret declaration files; without files, run the
    /// generated judgement pool.
    Interpret { files: Vec<PathBuf> },
}

#[derive(Args)]
struct Opts {
    /// Backing model: fam or pullback.
    #[arg(long, global = true, default_value = "pullback")]
    model: String,
    /// Bounds profile the flags below override.
    #[arg(long, global = true, env = "LUC_BOUNDS_PROFILE", default_value = "default")]
    profile: String,
    #[arg(long, global = true)]
    max_ctx: Option<usize>,
    #[arg(long, global = true)]
    max_fiber: Option<usize>,
    #[arg(long, global = true)]
    max_universe: Option<usize>,
    #[arg(long, global = true)]
    telescope_depth: Option<usize>,
    /// Substitutions tried per context.
    #[arg(long, global = true)]
    sigma_pool: Option<usize>,
    /// Former to check: sums, pi, sigma, id, unit, zero, w, or all.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// Seed of the judgement pool (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value = "0x5eed", value_parser = parse_seed)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Take copairs directly over the context instead of over the universe,
    /// and expect the copair stability check to fail.
    #[arg(long, global = true)]
    shortcut_copair: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("bad seed {s:?}: {e}"))
}

struct RunConfig {
    model: Box<dyn Model>,
    bounds: Bounds,
    thin: Thinning,
    formers: Vec<Former>,
    seed: u64,
    smoke: bool,
    format: Format,
    shortcut_copair: bool,
}

/// A usage problem: reported with exit status 2.
struct Usage(String);

impl RunConfig {
    fn from_opts(o: Opts) -> Result<Self, Usage> {
        let model = by_name(&o.model).ok_or_else(|| Usage(format!("unknown model {:?} (expected fam or pullback)", o.model)))?;
        let mut bounds =
            Bounds::profile(&o.profile).ok_or_else(|| Usage(format!("unknown bounds profile {:?} (expected smoke, default or deep)", o.profile)))?;
        bounds.max_ctx = o.max_ctx.unwrap_or(bounds.max_ctx);
        bounds.max_fiber = o.max_fiber.unwrap_or(bounds.max_fiber);
        bounds.max_universe = o.max_universe.unwrap_or(bounds.max_universe);
        bounds.telescope_depth = o.telescope_depth.unwrap_or(bounds.telescope_depth);
        if !bounds.is_valid() {
            return Err(Usage("bounds must be positive".into()));
        }
        let mut thin = Thinning::default();
        thin.substitutions = o.sigma_pool.unwrap_or(thin.substitutions);
        if thin.substitutions == 0 {
            return Err(Usage("--sigma-pool must be positive".into()));
        }
        let formers = match o.suite.as_str() {
            "all" => Former::ALL.to_vec(),
            name => vec![Former::parse(name).ok_or_else(|| Usage(format!("unknown suite {name:?}")))?],
        };
        Ok(RunConfig {
            model,
            bounds,
            thin,
            formers,
            seed: o.seed,
            smoke: o.profile == "smoke",
            format: o.format,
            shortcut_copair: o.shortcut_copair,
        })
    }

    fn all_formers(&self) -> bool {
        self.formers.len() == Former::ALL.len()
    }
}

/// A finished check and whether it was meant to fail.
struct Line {
    report: Report,
    control: bool,
}

impl Line {
    fn expect(report: Report) -> Line {
        Line { report, control: false }
    }

    fn control(mut report: Report) -> Line {
        report.name = format!("control/{}", report.name);
        Line { report, control: true }
    }

    fn ok(&self) -> bool {
        self.report.passed() != self.control
    }
}

fn emit(lines: &mut [Line], format: Format) -> ExitCode {
    lines.sort_by(|a, b| a.report.name.cmp(&b.report.name));
    for l in lines.iter() {
        let r = &l.report;
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        match format {
            Format::Machine => {
                let id = r.witness_id().map(|w| format!(" {w}")).unwrap_or_default();
                println!("CHECK {} {} {verdict}{id}", r.name, r.cases);
            }
            Format::Human => {
                let note = match (l.control, l.ok()) {
                    (true, true) => " (expected)",
                    (true, false) => " (UNEXPECTED: control should fail)",
                    _ => "",
                };
                println!("{}: {verdict}{note} ({} cases, {} failures)", r.name, r.cases, r.failures);
                if let Some(w) = &r.witness {
                    println!("  witness: {w}");
                }
            }
        }
    }
    if lines.iter().all(Line::ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check_axioms(cfg: &RunConfig) -> Vec<Line> {
    let (m, b) = (cfg.model.as_ref(), &cfg.bounds);
    let split = check_splitness(m, b);
    let wide = Bounds { max_fiber: b.max_fiber.max(2), ..*b };
    vec![
        Line::expect(check_fibration_axioms(m, b)),
        if m.claims_split() { Line::expect(split) } else { Line::control(split) },
        Line::expect(check_lf(b)),
        Line::expect(check_fullness(m, b)),
        Line::expect(check_pseudo_action(m, &ReflAction, b, true)),
        // both corruptions only show on fibers of size two
        Line::control(named(check_lf_with(&wide, corrupted_eval), "lf-corrupted-eval")),
        Line::control(named(check_pseudo_action(m, &CollapsingAction, &wide, true), "pseudo-action-collapsing")),
        Line::control(corrupted_axioms(m, b)),
    ]
}

fn corrupted_axioms(m: &dyn Model, b: &Bounds) -> Report {
    let mut r = if m.name() == FamModel.name() {
        check_fibration_axioms(&CorruptedLift(FamModel), b)
    } else {
        check_fibration_axioms(&CorruptedLift(PullbackModel), b)
    };
    r.name = format!("fibration-axioms-corrupted-lift[{}]", m.name());
    r
}

/// Renames a control after the fixture it exercises, keeping the model tag.
fn named(mut r: Report, what: &str) -> Report {
    let tag = r.name.find('[').map(|i| r.name[i..].to_string()).unwrap_or_default();
    r.name = format!("{what}{tag}");
    r
}

fn strictify(cfg: &RunConfig) -> Vec<Line> {
    let (m, b, thin) = (cfg.model.as_ref(), &cfg.bounds, cfg.thin);
    let suite = BangSuite::new(m);
    let mut lines = Vec::new();
    for &f in &cfg.formers {
        if f == Former::W {
            for regime in [WRegime::Branching, WRegime::Leaves] {
                lines.push(Line::expect(check_w_stability(&suite, b, thin, regime)));
                lines.push(Line::expect(check_w_square(&suite, b, thin, regime)));
            }
        } else {
            lines.extend(check_former(&suite, b, thin, f).into_iter().map(Line::expect));
        }
        lines.push(Line::expect(certify_former(m, b, thin, f)));
        if !m.claims_split() && f != Former::W {
            let direct = DirectSuite::new(m);
            let strict = check_former(&direct, b, thin, f).into_iter().next();
            // the empty type has one total space over each context, so no
            // provider can make it non-strict
            let wrap = if f == Former::Zero { Line::expect } else { Line::control };
            lines.extend(strict.filter(|r| r.name.starts_with("strict-")).map(wrap));
        }
        match f {
            Former::Sum => lines.push(Line::control(named(certify_sums(m, b, thin, &dropping_sum), "weak-sum-dropping"))),
            Former::Id => lines.push(Line::control(named(certify_ids(m, b, thin, &loopy_id), "weak-id-loopy"))),
            _ => {}
        }
    }
    if cfg.all_formers() {
        lines.push(Line::expect(check_bang_splitness(m, b, thin.types)));
        lines.push(Line::expect(check_equivalence(m, b, false)));
        lines.push(Line::control(named(check_equivalence(m, b, true), "equivalence-drop-one")));
    }
    if cfg.shortcut_copair {
        let shortcut = BangSuite::new(m).with_shortcut_copair(true);
        let r = check_former(&shortcut, b, thin, Former::Sum).into_iter().next().expect("sum report");
        lines.push(Line::control(named(r, "shortcut-copair/strict-sum")));
    }
    lines
}

fn pool_config(cfg: &RunConfig) -> PoolConfig {
    let base = if cfg.smoke { PoolConfig::smoke() } else { PoolConfig::default() };
    PoolConfig { seed: cfg.seed, ..base }
}

fn interpret_pool(cfg: &RunConfig) -> Vec<Line> {
    let pool = build(pool_config(cfg));
    let suite = BangSuite::new(cfg.model.as_ref());
    let mut lines: Vec<Line> = soundness(&suite, &pool).into_iter().map(Line::expect).collect();
    lines.push(Line::expect(agreement(&DirectSuite::new(&FamModel), &suite, &pool)));
    if cfg.model.name() == PullbackModel.name() {
        lines.extend(soundness(&DirectSuite::new(&PullbackModel), &pool).into_iter().map(Line::control));
    }
    lines
}

/// Failure to interpret a file: exit status 2 for unreadable or
/// unparsable input, 1 for ill-typed declarations.
struct FileError {
    code: u8,
    message: String,
}

fn interpret_files(cfg: &RunConfig, files: &[PathBuf]) -> Result<Vec<Line>, FileError> {
    let suite = BangSuite::new(cfg.model.as_ref());
    let interp = Interp::new(&suite);
    let mut lines = Vec::new();
    for path in files {
        let shown = path.display();
        let text = std::fs::read_to_string(path).map_err(|e| FileError { code: 2, message: format!("{shown}: {e}") })?;
        let module = parse_file(&text)
            .map_err(|e| FileError { code: 2, message: format!("{shown}:{}:{}: {}", e.line, e.col, e.message) })?;
        let ill = |name: &str, e: &dyn std::fmt::Display| FileError { code: 1, message: format!("{shown}: {name}: {e}") };
        for decl in &module.decls {
            match decl {
                Decl::Ctx { name, ctx } => {
                    check_ctx(ctx).map_err(|e| ill(name, &e))?;
                }
                Decl::Ty { name, ctx, ty } => {
                    let g = &module.contexts[ctx];
                    check_ty(g, ty).map_err(|e| ill(name, &e))?;
                    let sizes = interp.ctx(g).and_then(|sc| interp.ty(&sc, g, ty)).and_then(|a| luc_core::mltt::interp::fiber_sizes(&suite, &a));
                    let sizes = sizes.map_err(|e| ill(name, &e))?;
                    match cfg.format {
                        Format::Human => println!("{name}: fiber sizes: {sizes:?}"),
                        Format::Machine => println!("FIBERS {name} {sizes:?}"),
                    }
                }
                Decl::Tm { name, ctx, tm, ty } => {
                    let g = &module.contexts[ctx];
                    check_ty(g, ty).and_then(|_| check(g, tm, ty)).map_err(|e| ill(name, &e))?;
                    interp.ctx(g).and_then(|sc| interp.tm(&sc, g, tm)).map_err(|e| ill(name, &e))?;
                }
                Decl::Subst { name, from, to, subst } => {
                    let (delta, gamma) = (&module.contexts[from], &module.contexts[to]);
                    check_subst(delta, gamma, subst).map_err(|e| ill(name, &e))?;
                    let pool = subst_pool(cfg, &module, delta, gamma, to, SubstCase { from: 0, to: 1, sigma: subst.clone() });
                    let mut report = Report::new(format!("substitution-commutation[{name}]"));
                    for r in soundness(&suite, &pool) {
                        report.absorb(r);
                    }
                    lines.push(Line::expect(report));
                }
            }
        }
    }
    Ok(lines)
}

/// The declared types and terms over `gamma`, and its variables, checked
/// against one substitution.
fn subst_pool(cfg: &RunConfig, module: &Module, delta: &Ctx, gamma: &Ctx, to: &str, case: SubstCase) -> Pool {
    let mut types = Vec::new();
    let mut terms = Vec::new();
    for decl in &module.decls {
        match decl {
            Decl::Ty { ctx, ty, .. } if ctx == to => types.push((1, ty.clone())),
            Decl::Tm { ctx, tm, ty, .. } if ctx == to => terms.push(TermCase { ctx: 1, tm: tm.clone(), ty: ty.clone(), deep: false }),
            _ => {}
        }
    }
    for i in 0..gamma.len() {
        let ty = luc_core::mltt::infer(gamma, &Tm::Var(i)).expect("variables are typed");
        terms.push(TermCase { ctx: 1, tm: Tm::Var(i), ty, deep: false });
    }
    Pool { config: pool_config(cfg), contexts: vec![delta.clone(), gamma.clone()], terms, types, substs: vec![case] }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_opts(cli.opts) {
        Ok(c) => c,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}\n\nUsage: luc [OPTIONS] <check-axioms|strictify|interpret> [FILES]...");
            return ExitCode::from(2);
        }
    };
    let mut lines = match &cli.command {
        Command::CheckAxioms => check_axioms(&cfg),
        Command::Strictify => strictify(&cfg),
        Command::Interpret { files } if files.is_empty() => interpret_pool(&cfg),
        Command::Interpret { files } => match interpret_files(&cfg, files) {
            Ok(lines) => lines,
            Err(e) => {
                eprintln!("error: {}", e.message);
                return ExitCode::from(e.code);
            }
        },
    };
    emit(&mut lines, cfg.format)
}
