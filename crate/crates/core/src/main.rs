use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use nelson_core::embedding::{context_of, pair_model};
use nelson_core::kernel::{
    check_proof, corpus_script, expected_class, parse_script, parse_sequent, LogicId, Script, CORPUS, MUTANTS,
};
use nelson_core::search::{
    check_corpus_soundness, check_heredity, check_unfolding, find_countermodel, pairing_sweep,
    Bounds, SearchError, SweepReport, Verdict,
};
use nelson_core::semantics::{eval, parse_model, validate_model, write_model, Environment, Kind, KripkeModel};
use nelson_core::syntax::{parse_formula_inferring, print, Formula, Language, Signature};

#[derive(Parser)]
#[command(name = "nelson")]
#[command(about = "Proof checking, model checking and countermodel search for N4 and Int with descriptions")]
#[command(version)]
struct Cli {
    /// Output style: human | lines (one result line per query)
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,

    /// Logic id, overriding the one a proof script names
    #[arg(long, global = true)]
    logic: Option<LogicId>,

    /// Maximum number of worlds
    #[arg(long, global = true, default_value_t = 2)]
    worlds: usize,

    /// Maximum number of objects
    #[arg(long, global = true, default_value_t = 2)]
    objects: usize,

    /// Maximum number of intensions (defaults to the object bound)
    #[arg(long, global = true)]
    intensions: Option<usize>,

    /// Formula depth for the property sweeps
    #[arg(long, global = true, default_value_t = 1)]
    depth: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Check .nd proof scripts and print the derived sequents
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Translate a strong-negation formula into the falsum language
    Translate { formula: String },
    /// Evaluate a formula at a world of a .km model
    Eval {
        model: PathBuf,
        world: String,
        formula: String,
    },
    /// Search for a countermodel to the sequent in a .seq file
    Search { logic: LogicId, sequent: PathBuf },
    /// Check the bundled corpus and mutants and run the property sweeps
    Corpus,
    /// Print the frame-condition violations of a .km model
    ValidateModel { model: PathBuf },
}

/// A failure that ends the run with exit code 2.
struct Usage(String);

impl From<SearchError> for Usage {
    fn from(e: SearchError) -> Self {
        Usage(e.to_string())
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn human(&self, s: impl AsRef<str>) {
        if self.format == Format::Human {
            println!("{}", s.as_ref().trim_end());
        }
    }

    fn line(&self, s: impl AsRef<str>) {
        if self.format == Format::Lines {
            println!("{}", s.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn bounds(cli: &Cli, kind: Kind, free: bool, formulas: &[&Formula]) -> Bounds {
    let mut b = Bounds::for_formulas(kind, free, cli.worlds, cli.objects, formulas.iter().copied());
    if let Some(n) = cli.intensions {
        b.max_intensions = n;
    }
    b
}

/// Returns whether the result was positive.
fn run(cli: &Cli) -> Result<bool, Usage> {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Check { files } => {
            let mut all = true;
            for path in files {
                let text = read(path)?;
                let script = parse_script(&text).map_err(|e| Usage(format!("{}:{e}", path.display())))?;
                let logic = cli.logic.unwrap_or(script.logic);
                match check_proof(&script.proof, logic) {
                    Ok(s) => {
                        out.human(s.to_string());
                        out.line(format!("check\t{}\taccepted\t{logic}\t{}", path.display(), s.to_seq()));
                    }
                    Err(e) => {
                        all = false;
                        out.human(format!("{}: rejected in {logic} {e}", path.display()));
                        out.line(format!(
                            "check\t{}\trejected\t{:?}\t{}\t{}",
                            path.display(),
                            e.kind.class(),
                            e.path_string(),
                            e.kind
                        ));
                    }
                }
            }
            Ok(all)
        }
        Command::Translate { formula } => {
            let mut sig = Signature::new(Language::Negation).with_descriptions(true).with_free(true);
            let a = parse_formula_inferring(formula, &mut sig).map_err(|e| Usage(e.to_string()))?;
            let t = context_of(&a)
                .and_then(|ctx| ctx.translate(&a))
                .map_err(|e| Usage(e.to_string()))?;
            out.human(print(&t));
            out.line(format!("translate\t{}\t{}", print(&a), print(&t)));
            Ok(true)
        }
        Command::Eval { model, world, formula } => {
            let m = load_model(model)?;
            let w = m
                .worlds
                .iter()
                .position(|v| v == world)
                .ok_or_else(|| Usage(format!("no world named {world}")))?;
            let language = match m.kind {
                Kind::Nelsonian => Language::Negation,
                Kind::Intuitionistic => Language::Falsum,
            };
            let mut sig = Signature::new(language)
                .with_descriptions(true)
                .with_free(m.free)
                .with_primed(m.kind == Kind::Intuitionistic);
            let a = parse_formula_inferring(formula, &mut sig).map_err(|e| Usage(e.to_string()))?;
            let v = eval(&m, w, &a, &Environment::of(&m)).map_err(|e| Usage(e.to_string()))?;
            out.human(v.to_string());
            out.line(format!("eval\t{world}\t{}\t{v}", print(&a)));
            Ok(true)
        }
        Command::Search { logic, sequent } => {
            let text = read(sequent)?;
            let (assumptions, conclusion, _) =
                parse_sequent(&text, *logic).map_err(|e| Usage(format!("{}:{e}", sequent.display())))?;
            let kind = if logic.is_nelsonian() {
                Kind::Nelsonian
            } else {
                Kind::Intuitionistic
            };
            let all: Vec<&Formula> = assumptions.iter().chain(std::iter::once(&conclusion)).collect();
            let b = bounds(cli, kind, logic.free, &all);
            let v = find_countermodel(&assumptions, &conclusion, &b)?;
            out.human(v.to_string());
            out.line(verdict_line(*logic, &v));
            Ok(!v.found())
        }
        Command::Corpus => corpus(cli, &out),
        Command::ValidateModel { model } => {
            let m = load_model(model)?;
            let violations = validate_model(&m);
            if violations.is_empty() {
                out.human("no violations");
                out.line(format!("validate\t{}\tok", model.display()));
            }
            for v in &violations {
                out.human(v.to_string());
                out.line(format!("validate\t{}\t{}\t{v}", model.display(), v.clause()));
            }
            Ok(violations.is_empty())
        }
    }
}

fn load_model(path: &Path) -> Result<KripkeModel, Usage> {
    parse_model(&read(path)?).map_err(|e| Usage(format!("{}:{e}", path.display())))
}

fn verdict_line(logic: LogicId, v: &Verdict) -> String {
    match v {
        Verdict::CountermodelFound {
            model,
            world,
            assignment,
            examined,
            ..
        } => {
            let values: Vec<String> = assignment
                .iter()
                .map(|(x, d)| format!("{x}={}", model.intensions[*d].name))
                .collect();
            let text = write_model(model);
            let file: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            format!(
                "search\t{logic}\tcountermodel\t{}\t{}\t{examined}\t{}",
                model.worlds[*world],
                if values.is_empty() { "-".to_string() } else { values.join(" ") },
                file.join("; ")
            )
        }
        Verdict::NoCountermodelWithinBounds { examined, .. } => {
            format!("search\t{logic}\tnone\t{examined}")
        }
    }
}

fn sweep_line(out: &Out, name: &str, r: &SweepReport, started: Instant) -> bool {
    out.human(format!("{name}: {r} ({:.1?})", started.elapsed()));
    for e in &r.examples {
        out.human(format!("  {e}"));
    }
    out.line(format!(
        "sweep\t{name}\t{}\t{}\t{}\t{}",
        if r.clean() { "ok" } else { "fail" },
        r.models,
        r.checked,
        r.failures
    ));
    r.clean()
}

fn corpus(cli: &Cli, out: &Out) -> Result<bool, Usage> {
    let mut ok = true;
    for (name, _) in CORPUS {
        let s: Script = corpus_script(name).expect("bundled");
        match check_proof(&s.proof, s.logic) {
            Ok(seq) => {
                out.human(format!("{name}: {seq}"));
                out.line(format!("corpus\t{name}\taccepted\t{}\t{}", s.logic, seq.to_seq()));
            }
            Err(e) => {
                ok = false;
                out.human(format!("{name}: rejected {e}"));
                out.line(format!("corpus\t{name}\trejected\t{:?}", e.kind.class()));
            }
        }
    }
    for (name, text) in MUTANTS {
        let s = corpus_script(name).expect("bundled");
        let want = expected_class(text);
        let got = check_proof(&s.proof, s.logic).err().map(|e| e.kind.class());
        let hit = got.is_some() && got == want;
        ok &= hit;
        let shown = got.map_or("accepted".to_string(), |c| format!("{c:?}"));
        out.human(format!(
            "mutant {name}: {shown} ({})",
            if hit { "as expected" } else { "UNEXPECTED" }
        ));
        out.line(format!("mutant\t{name}\t{shown}\t{}", if hit { "ok" } else { "fail" }));
    }

    let (w, h) = (cli.worlds, cli.objects);
    let base = |kind: Kind, free: bool| {
        let mut b = Bounds::new(kind, free, w, h)
            .with_predicate("P", 1)
            .with_constant("a")
            .with_identity_extension(kind == Kind::Nelsonian);
        if let Some(n) = cli.intensions {
            b.max_intensions = n;
        }
        b
    };
    for free in [false, true] {
        let tag = if free { "free" } else { "ordinary" };
        let t = Instant::now();
        let r = pairing_sweep(&base(Kind::Nelsonian, free), cli.depth, pair_model)?;
        ok &= sweep_line(out, &format!("pairing-{tag}"), &r.agreement, t);
        ok &= sweep_line(out, &format!("heredity-nelsonian-{tag}"), &r.heredity, t);
        let t = Instant::now();
        let r = check_heredity(&base(Kind::Intuitionistic, free), cli.depth)?;
        ok &= sweep_line(out, &format!("heredity-intuitionistic-{tag}"), &r, t);
    }
    for kind in [Kind::Nelsonian, Kind::Intuitionistic] {
        for free in [false, true] {
            let t = Instant::now();
            let r = check_unfolding(&base(kind, free).with_predicate("Q", 1), 0)?;
            let tag = if free { "free" } else { "ordinary" };
            ok &= sweep_line(out, &format!("unfolding-{kind}-{tag}"), &r, t);
        }
    }
    let t = Instant::now();
    for case in check_corpus_soundness(w.min(2), h.min(2))? {
        let sound = !case.verdict.found();
        ok &= sound;
        out.human(format!(
            "soundness {}: {}",
            case.name,
            if sound { "no countermodel".to_string() } else { case.verdict.to_string() }
        ));
        out.line(format!("soundness\t{}\t{}", case.name, if sound { "ok" } else { "fail" }));
    }
    out.human(format!("soundness sweep took {:.1?}", t.elapsed()));
    out.human(if ok { "all checks passed" } else { "some checks failed" });
    Ok(ok)
}
