use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use maj_congruence::bijections::{
    bijection_41_forward, bijection_42_forward, build_class_array, BijectionTrace,
};
use maj_congruence::enumeration::count_matrix;
use maj_congruence::{
    factorial, q_factorial, CongruenceQuery, Method, Permutation, Suite, SuiteReport, Verifier,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "majcong",
    version,
    about = "Major index congruence classes of permutations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for enumeration; defaults to available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    P41,
    P42,
}

#[derive(Subcommand)]
enum Command {
    /// Descent set, maj and inverse maj of a word.
    Stats { word: String },
    /// Count permutations by maj mod k and inverse maj mod l.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
        #[arg(long, default_value = "brute")]
        method: Method,
    },
    /// Run one of the constructive bijections on a word.
    Bijection {
        #[arg(value_enum)]
        kind: Kind,
        word: String,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: usize,
    },
    /// Annotated circular class array of a seed fixing its largest letter.
    Classtable { word: String },
    /// Coefficients of the maj generating function, optionally folded mod q^k - 1.
    Gf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mod_k: Option<usize>,
    },
    /// Run the verification suites up to a degree.
    Verify {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        suite: Option<Suite>,
        /// Replaces maj with a deliberately wrong statistic.
        #[arg(long, hide = true)]
        corrupt_maj: bool,
    },
}

#[derive(Serialize)]
struct Envelope {
    command: &'static str,
    parameters: BTreeMap<&'static str, Value>,
    result: Value,
    elapsed_ms: u64,
}

/// What a command produced, before formatting.
struct Output {
    parameters: BTreeMap<&'static str, Value>,
    result: Value,
    text: String,
    csv: Option<String>,
    failure: Option<String>,
}

impl Output {
    fn new(result: Value, text: String) -> Self {
        Self {
            parameters: BTreeMap::new(),
            result,
            text,
            csv: None,
            failure: None,
        }
    }

    fn param(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.parameters.insert(key, json!(value));
        self
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let threads = match cli.threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |t| t.get()),
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let out = match cli.command {
        Command::Stats { word } => stats(&word)?,
        Command::Count {
            n,
            k,
            l,
            i,
            j,
            method,
        } => count(n, k, l, i.zip(j), method, threads)?,
        Command::Bijection { kind, word, i, j } => bijection(kind, &word, i, j)?,
        Command::Classtable { word } => classtable(&word)?,
        Command::Gf { n, mod_k } => gf(n, mod_k)?,
        Command::Verify {
            n_max,
            suite,
            corrupt_maj,
        } => verify(n_max, suite, corrupt_maj)?,
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;

    match cli.format {
        Format::Text => print!("{}", out.text),
        Format::Csv => match &out.csv {
            Some(csv) => print!("{csv}"),
            None => bail!("{name} has no tabular output; use --format text or json"),
        },
        Format::Json => {
            let envelope = Envelope {
                command: name,
                parameters: out.parameters,
                result: out.result,
                elapsed_ms,
            };
            println!("{}", serde_json::to_string_pretty(&envelope)?);
        }
    }
    Ok(match out.failure {
        Some(detail) => {
            eprintln!("verification failed: {detail}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    })
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Stats { .. } => "stats",
        Command::Count { .. } => "count",
        Command::Bijection { .. } => "bijection",
        Command::Classtable { .. } => "classtable",
        Command::Gf { .. } => "gf",
        Command::Verify { .. } => "verify",
    }
}

fn parse_word(word: &str) -> anyhow::Result<Permutation> {
    word.parse()
        .with_context(|| format!("cannot parse {word:?} as a permutation"))
}

fn stats(word: &str) -> anyhow::Result<Output> {
    let p = parse_word(word)?;
    let inverse = p.inverse();
    let descents = p.descent_set();
    let result = json!({
        "word": p,
        "descents": descents.positions(),
        "maj": p.maj(),
        "inverse": inverse,
        "inverse_maj": p.inverse_maj(),
    });
    let text = format!(
        "word         {}\ndescents     {:?}\nmaj          {}\ninverse      {}\ninverse maj  {}\n",
        p.display_word(),
        descents.positions(),
        p.maj(),
        inverse.display_word(),
        p.inverse_maj()
    );
    let csv = format!(
        "word,descents,maj,inverse,inverse_maj\n{},{},{},{},{}\n",
        p.display_word(),
        descents
            .positions()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        p.maj(),
        inverse.display_word(),
        p.inverse_maj()
    );
    Ok(Output::new(result, text).param("word", p).csv(csv))
}

fn count(
    n: usize,
    k: usize,
    l: usize,
    cell: Option<(usize, usize)>,
    method: Method,
    threads: usize,
) -> anyhow::Result<Output> {
    // Validates degree and moduli (and the residues, when given) up front.
    let (i, j) = cell.unwrap_or((0, 0));
    CongruenceQuery::new(n, k, l, i, j)?;
    if method != Method::Closed && n >= 10 {
        eprintln!("enumerating S_{n} on {threads} thread(s)");
    }
    let matrix = count_matrix(n, k, l, method, threads)?;
    let out = match cell {
        Some((i, j)) => {
            let value = matrix.entries[i][j];
            Output::new(json!(value), format!("{value}\n"))
                .csv(format!("n,k,l,i,j,count\n{n},{k},{l},{i},{j},{value}\n"))
                .param("i", i)
                .param("j", j)
        }
        None => Output::new(json!(matrix), matrix.to_text()).csv(matrix.to_csv()),
    };
    Ok(out
        .param("n", n)
        .param("k", k)
        .param("l", l)
        .param("method", method))
}

fn bijection(kind: Kind, word: &str, i: Option<usize>, j: usize) -> anyhow::Result<Output> {
    let input = parse_word(word)?;
    let n = input.degree() + 1;
    let (name, trace, maj_check) = match kind {
        Kind::P41 => {
            let i = i.ok_or_else(|| anyhow!("p41 requires --i"))?;
            ("p41", bijection_41_forward(&input, i, j)?, Some(i))
        }
        Kind::P42 => {
            if i.is_some() {
                bail!("p42 takes no --i");
            }
            ("p42", bijection_42_forward(&input, j)?, None)
        }
    };
    let out = &trace.output;
    let n = if matches!(kind, Kind::P42) { n - 1 } else { n };
    let maj_ok = maj_check.is_none_or(|i| out.maj() % n == i);
    let imaj_ok = out.inverse_maj() % (n - 1) == j;
    let verified = maj_ok && imaj_ok && trace.is_consistent(&input_base(kind, &trace));

    let mut text = render_trace(&trace, n);
    writeln!(
        text,
        "check     maj {} = {} (mod {n}), inverse maj {} = {} (mod {}): {}",
        out.maj(),
        out.maj() % n,
        out.inverse_maj(),
        out.inverse_maj() % (n - 1),
        n - 1,
        if verified { "ok" } else { "FAILED" }
    )?;
    let result = json!({
        "trace": trace,
        "maj": out.maj(),
        "inverse_maj": out.inverse_maj(),
        "verified": verified,
    });
    let mut output = Output::new(result, text)
        .param("kind", name)
        .param("word", input)
        .param("j", j);
    if let Some(i) = maj_check {
        output = output.param("i", i);
    }
    if !verified {
        output.failure = Some(format!("{out} misses the requested residues"));
    }
    Ok(output)
}

/// The permutation that was rotated: for p42 the input with `n` erased.
fn input_base(kind: Kind, trace: &BijectionTrace) -> Permutation {
    match kind {
        Kind::P41 => trace.input.clone(),
        Kind::P42 => trace
            .input
            .erase_max()
            .expect("p42 input contains its maximum"),
    }
}

fn render_trace(trace: &BijectionTrace, n: usize) -> String {
    format!(
        "input     {}\nrotate    t = {} -> {}\ninsert    {n} at position {} -> {}\noutput    {}\n",
        trace.input.display_word(),
        trace.rotation_exponent,
        trace.rotation.display_word(),
        trace.insert_position,
        trace.output.display_word(),
        trace.output.display_word(),
    )
}

fn classtable(word: &str) -> anyhow::Result<Output> {
    let seed = parse_word(word)?;
    let grid = build_class_array(&seed)?;
    let mut csv = String::from("row,column,word,maj,inverse_maj\n");
    for (r, row) in grid.rows().iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            writeln!(
                csv,
                "{},{},{},{},{}",
                r + 1,
                c + 1,
                cell.word.display_word(),
                cell.maj,
                cell.imaj
            )?;
        }
    }
    let result = json!({ "seed": seed, "rows": grid.rows() });
    Ok(Output::new(result, grid.render_text())
        .param("word", seed)
        .csv(csv))
}

fn gf(n: usize, mod_k: Option<usize>) -> anyhow::Result<Output> {
    let poly = q_factorial::<u64>(n)?;
    let coefficients = poly.coefficients().to_vec();
    let mut text = format!("{}\n", join(&coefficients));
    let mut csv = String::from("exponent,coefficient\n");
    for (e, c) in coefficients.iter().enumerate() {
        writeln!(csv, "{e},{c}")?;
    }
    let mut result = json!({ "coefficients": coefficients });
    let mut out_params = vec![("n", json!(n))];
    if let Some(k) = mod_k {
        let folded = poly.reduce_mod_qk(k)?;
        let total = factorial::<u64>(n)?;
        let expected = (total % k as u64 == 0).then(|| total / k as u64);
        let constant = expected.is_some_and(|e| folded.iter().all(|&c| c == e));
        writeln!(
            text,
            "mod {k}: {}\nconstant n!/k: {}",
            join(&folded),
            if constant { "yes" } else { "no" }
        )?;
        csv = String::from("residue,count\n");
        for (r, c) in folded.iter().enumerate() {
            writeln!(csv, "{r},{c}")?;
        }
        result["folded"] = json!(folded);
        result["expected"] = json!(expected);
        result["constant"] = json!(constant);
        out_params.push(("mod_k", json!(k)));
    }
    let mut out = Output::new(result, text).csv(csv);
    for (key, value) in out_params {
        out = out.param(key, value);
    }
    Ok(out)
}

fn join<T: ToString>(values: &[T]) -> String {
    let parts: Vec<String> = values.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn corrupted_maj(p: &Permutation) -> usize {
    p.maj() + usize::from(p.word().first() == Some(&1))
}

fn verify(n_max: usize, suite: Option<Suite>, corrupt_maj: bool) -> anyhow::Result<Output> {
    let verifier = if corrupt_maj {
        Verifier::with_maj(corrupted_maj)
    } else {
        Verifier::new()
    };
    let suites: Vec<Suite> = suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
    let mut reports: Vec<SuiteReport> = Vec::with_capacity(suites.len());
    for s in suites {
        eprintln!("suite {s} up to n = {n_max}");
        reports.push(verifier.run(s, n_max)?);
    }
    let mut text = String::new();
    let mut csv = String::from("suite,passed,checks\n");
    for r in &reports {
        writeln!(
            text,
            "{:<11} {} ({} checks)",
            r.suite.name(),
            if r.passed { "pass" } else { "FAIL" },
            r.checks
        )?;
        writeln!(csv, "{},{},{}", r.suite.name(), r.passed, r.checks)?;
    }
    let failure = reports.iter().find(|r| !r.passed).map(|r| {
        let detail = r.counterexample.as_ref().map_or_else(
            || "no counterexample recorded".to_string(),
            ToString::to_string,
        );
        format!("{}: {detail}", r.suite.name())
    });
    let passed = failure.is_none();
    let mut out = Output::new(json!({ "passed": passed, "suites": reports }), text)
        .csv(csv)
        .param("n_max", n_max);
    if let Some(s) = suite {
        out = out.param("suite", s);
    }
    out.failure = failure;
    Ok(out)
}
