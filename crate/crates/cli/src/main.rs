//! Command line front end.
//!
//! Every decision subcommand prints one record line and exits with 0 for a
//! positive verdict and 1 for a negative one. Input errors exit with 2.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gamequant::automata::{Alphabet, BoolFn, Symbol, UpWord, WordAutomaton};
use gamequant::elim::{
    decide_index_parameterless, eliminate_game_quantifier_with, eliminate_index_quantifier_with, AutomatonKind,
    EliminationRoute,
};
use gamequant::error::{Error, Result};
use gamequant::games::{buchi_landweber, simulate, zielonka, Player, Realizability};
use gamequant::io::{self as gio, Document, Verdict};
use gamequant::synthesis::{synthesize_winning_transducer, SeparatelyDependentSpec, SynthesisOutcome};
use gamequant::wilke::{algebra_from_dpas, check_wilke_axioms, ramsey_bound, ramsey_constant, WilkeAlgebra};

/// Default bound on the states of intermediate constructions.
const DEFAULT_LIMIT: usize = 200_000;

#[derive(Parser)]
#[command(name = "gamequant", version, about = "Parity automata, parity games and quantifier elimination over ω-words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Auto,
    Strategies,
    Refutations,
}

impl From<Route> for EliminationRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::Auto => EliminationRoute::Auto,
            Route::Strategies => EliminationRoute::Strategies,
            Route::Refutations => EliminationRoute::Refutations,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Does the automaton accept the word? Exit 1 if not.
    Membership {
        #[arg(long)]
        automaton: PathBuf,
        /// Ultimately periodic word, e.g. "a b (b a)".
        #[arg(long)]
        word: String,
    },
    /// Solves a parity game. Exit 1 if Player I wins from the initial position.
    Solve {
        #[arg(long)]
        game: PathBuf,
        /// Also write the solved arena as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Builds a winning transducer. Exit 1 if the specification is not realizable.
    ///
    /// With --spec (an automaton over X × Y) the game has no parameter. With
    /// --psi, --gamma, --fn and --word the specification is f(ψ…(W,X), γ…(Y))
    /// on the parameter word.
    Synthesize {
        #[arg(long, conflicts_with_all = ["psi", "gamma", "word"])]
        spec: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        psi: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        gamma: Vec<PathBuf>,
        /// Truth table of f, row 0 first; bit i of a row is argument i (ψs first).
        #[arg(long = "fn", requires = "word")]
        function: Option<String>,
        #[arg(long)]
        word: Option<String>,
        /// Where to write the transducer document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a transducer against an input word. Exit 1 if the specification is violated.
    Simulate {
        /// Automaton over X × Y, or W × X × Y with --w.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        transducer: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        w: Option<String>,
    },
    /// Eliminates the game quantifier from an automaton over W × X × Y.
    EliminateGame {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        route: Route,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eliminates the index quantifier from an automaton over W × X.
    EliminateIndex {
        #[arg(long)]
        spec: PathBuf,
        /// P,lo,hi or W,lo,hi.
        #[arg(long)]
        index: String,
        #[arg(long, default_value = "dt")]
        kind: String,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the language of the automaton recognized by an automaton of this index? Exit 1 if not.
    DecideIndex {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        index: String,
        #[arg(long, default_value = "dt")]
        kind: String,
    },
    /// Dumps the Wilke algebra recognizing deterministic automata, or checks an algebra.
    Algebra {
        #[arg(long, num_args = 1.., required_unless_present = "check")]
        automaton: Vec<PathBuf>,
        /// Check the axioms of an algebra or homomorphism document. Exit 1 on violations.
        #[arg(long, conflicts_with = "automaton")]
        check: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the Ramsey recursion value for an algebra.
    RamseyBound {
        /// Algebra or homomorphism document.
        #[arg(long)]
        algebra: PathBuf,
        /// Print the least sufficient length instead.
        #[arg(long)]
        exact: bool,
    },
    /// Graphviz export of any automaton, transducer or game document.
    Dot {
        #[arg(long)]
        input: PathBuf,
        /// Colour the winning regions of a game and draw strategies bold.
        #[arg(long)]
        solve: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    let mut s = String::new();
    let r = if path == Path::new("-") {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    r.map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok(s)
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, column, message } => {
            Error::invalid(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => other,
    })
}

fn automaton(path: &Path) -> Result<WordAutomaton> {
    in_file(path, gio::parse_automaton(&read(path)?))
}

fn word(text: &str, al: &Alphabet, what: &str) -> Result<UpWord<Symbol>> {
    gio::parse_upword(text, al).map_err(|e| Error::invalid(format!("{what}: {e}")))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// Writes a document to `out`, or to stdout when there is no file.
fn emit(out: &mut dyn Write, file: Option<&Path>, text: &str, record: Verdict) -> Result<bool> {
    match file {
        Some(p) => {
            write_out(p, text)?;
            line(out, &record)
        }
        None => {
            let _ = out.write_all(text.as_bytes());
            Ok(true)
        }
    }
}

fn line(out: &mut dyn Write, v: &Verdict) -> Result<bool> {
    let _ = writeln!(out, "{}", v.to_line());
    Ok(v.value != "false")
}

fn kind(s: &str) -> Result<AutomatonKind> {
    s.parse()
}

/// Reads the automaton as one over `U × A` with `U` a single letter.
fn parameterless(d: WordAutomaton) -> Result<WordAutomaton> {
    let al = d.alphabet();
    if al.arity() == 2 && al.factor(0).len() == 1 {
        return Ok(d);
    }
    let target = Alphabet::product(&[Alphabet::unit(), al.clone()]);
    d.cylinder(&target, &[1])
}

fn algebra_document(path: &Path) -> Result<WilkeAlgebra> {
    match in_file(path, gio::parse_document(&read(path)?))? {
        Document::Algebra(s) => Ok(s),
        Document::Homomorphism(h) => Ok(h.algebra),
        other => Err(Error::invalid(format!("{}: expected an algebra, found a {}", path.display(), other.kind()))),
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Membership { automaton: a, word: w } => {
            let d = automaton(&a)?;
            let w = word(&w, d.alphabet(), "--word")?;
            line(out, &Verdict::of_bool(d.accepts(&w)))
        }
        Command::Solve { game, dot } => {
            let g = in_file(&game, gio::parse_game(&read(&game)?))?;
            g.validate()?;
            let sol = zielonka(&g);
            if let Some(p) = dot {
                write_out(&p, &gio::game_dot(&g, Some(&sol)))?;
            }
            let winner = sol.winner[g.initial()];
            let names = |p: Player| sol.region(p).iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>().join(",");
            let v = Verdict::of_bool(winner == Player::II)
                .field("winner", winner)
                .field("region_i", names(Player::I))
                .field("region_ii", names(Player::II));
            line(out, &v)
        }
        Command::Synthesize { spec: Some(spec), out: file, function, .. } => {
            if function.is_some() {
                return Err(Error::invalid("--fn needs --psi, --gamma and --word instead of --spec"));
            }
            let d = automaton(&spec)?;
            match buchi_landweber(&d)? {
                Realizability::Realizable(t) => {
                    let v = Verdict::of_bool(true).field("states", t.machine.num_states());
                    if let Some(p) = file {
                        write_out(&p, &gio::print_transducer(&t))?;
                    }
                    line(out, &v)
                }
                Realizability::Unrealizable(table) => {
                    let xa = d.alphabet().factor(0);
                    let moves = table.iter().map(|&x| xa.name(x)).collect::<Vec<_>>().join(",");
                    line(out, &Verdict::of_bool(false).field("refutation", moves))
                }
            }
        }
        Command::Synthesize { spec: None, psi, gamma, function, word: w, out: file } => {
            let (Some(f), Some(w)) = (function, w) else {
                return Err(Error::invalid("expected --spec, or --psi, --gamma, --fn and --word"));
            };
            let psis = psi.iter().map(|p| automaton(p)).collect::<Result<Vec<_>>>()?;
            let gammas = gamma.iter().map(|p| automaton(p)).collect::<Result<Vec<_>>>()?;
            let spec = SeparatelyDependentSpec::new(BoolFn::from_table(&f)?, psis, gammas)?;
            let w = word(&w, spec.w_alphabet(), "--word")?;
            match synthesize_winning_transducer(&spec, &w)? {
                SynthesisOutcome::Realized(s) => {
                    if let Some(p) = file {
                        write_out(&p, &gio::print_transducer(&s.transducer))?;
                    }
                    let v = Verdict::of_bool(true).field("states", s.transducer.machine.num_states()).field("r", s.r);
                    line(out, &v)
                }
                SynthesisOutcome::Unrealizable(_) => line(out, &Verdict::of_bool(false)),
            }
        }
        Command::Simulate { spec, transducer, x, w } => {
            let d = automaton(&spec)?;
            let t = in_file(&transducer, gio::parse_transducer(&read(&transducer)?))?;
            let al = d.alphabet();
            let (wv, x) = match (&w, al.arity()) {
                (Some(w), 3) => (Some(word(w, al.factor(0), "--w")?), word(&x, al.factor(1), "--x")?),
                (None, 2) => (None, word(&x, al.factor(0), "--x")?),
                _ => return Err(Error::mismatch("use --w exactly when the automaton reads W × X × Y")),
            };
            let ya = al.factor(al.arity() - 1);
            if t.output != *ya {
                return Err(Error::mismatch("transducer outputs do not match the Y alphabet"));
            }
            let (y, ok) = simulate(&d, wv.as_ref(), &t, &x)?;
            line(out, &Verdict::of_bool(ok).field("y", gio::print_upword(&y, ya)))
        }
        Command::EliminateGame { spec, route, limit, out: file } => {
            let d = automaton(&spec)?;
            let e = eliminate_game_quantifier_with(&d, route.into(), limit)?;
            let record = Verdict::new("ok").field("states", e.num_states());
            emit(out, file.as_deref(), &gio::print_automaton(&e), record)
        }
        Command::EliminateIndex { spec, index, kind: k, limit, out: file } => {
            let d = automaton(&spec)?;
            let c = gio::parse_index_literal(&index)?;
            let e = eliminate_index_quantifier_with(&d, c, kind(&k)?, limit)?;
            let record = Verdict::new("ok").field("states", e.num_states());
            emit(out, file.as_deref(), &gio::print_automaton(&e), record)
        }
        Command::DecideIndex { spec, index, kind: k } => {
            let d = parameterless(automaton(&spec)?)?;
            let c = gio::parse_index_literal(&index)?;
            line(out, &Verdict::of_bool(decide_index_parameterless(&d, c, kind(&k)?)?))
        }
        Command::Algebra { automaton: files, check: None, out: file } => {
            let ds = files.iter().map(|p| automaton(p)).collect::<Result<Vec<_>>>()?;
            let h = algebra_from_dpas(&ds)?;
            let record = Verdict::new("ok").field("finite", h.algebra.fin_len()).field("infinite", h.algebra.inf_len());
            emit(out, file.as_deref(), &gio::print_homomorphism(&h), record)
        }
        Command::Algebra { check: Some(path), .. } => {
            let s = algebra_document(&path)?;
            let report = check_wilke_axioms(&s);
            let mut v = Verdict::of_bool(report.ok()).field("violations", report.violations.len());
            if let Some(first) = report.violations.first() {
                v = v.field("first", first);
            }
            line(out, &v)
        }
        Command::RamseyBound { algebra, exact } => {
            let s = algebra_document(&algebra)?;
            let r = if exact { ramsey_constant(&s) } else { ramsey_bound(&s) };
            line(out, &Verdict::new(r.to_string()))
        }
        Command::Dot { input, solve } => {
            let text = match in_file(&input, gio::parse_document(&read(&input)?))? {
                Document::Automaton(d) => gio::automaton_dot(&d),
                Document::Transducer(t) => gio::transducer_dot(&t),
                Document::Game(g) => {
                    let sol = if solve {
                        g.validate()?;
                        Some(zielonka(&g))
                    } else {
                        None
                    };
                    gio::game_dot(&g, sol.as_ref())
                }
                other => return Err(Error::invalid(format!("no DOT export for a {}", other.kind()))),
            };
            let _ = out.write_all(text.as_bytes());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
