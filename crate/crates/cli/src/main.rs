use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use origami_core::analysis::{analyze, Analysis, Limits, Origin, StageError};
use origami_core::commensurability::{compare, CommensurabilityReport};
use origami_core::lyapunov::{
    lyapunov_exponent, Contribution, LyapunovReport, ModularEmbeddingData,
};
use origami_core::modular::{CuspClass, DEFAULT_MAX_COSETS};
use origami_core::monodromy::{homology_rep, SymplecticRep};
use origami_core::rational::{construct, parse_rational, Construction};
use origami_core::veech::{veech_group, VeechGroup, DEFAULT_MAX_ORBIT};
use origami_core::{Error, ErrorClass, Exec, Origami};

#[derive(Parser)]
#[command(
    name = "origami",
    version,
    about = "Exact Lyapunov exponents of rank-two pieces of square-tiled surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Limit for every coset enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS, global = true)]
    max_cosets: usize,
    /// Limit for the Veech orbit and for orbits of subspaces.
    #[arg(long, default_value_t = DEFAULT_MAX_ORBIT, global = true)]
    max_orbit: usize,
    /// Disable data-parallel evaluation.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: Veech group, symplectic action, invariant pieces and their exponents.
    Analyze {
        /// Origami file (JSON or `r=...; u=...`), inline text, or one of `torus`, `l22`, `qmod9`.
        origami: String,
    },
    /// Veech group as a coset table with generators and cusps.
    Veech { origami: String },
    /// Integral symplectic action of the Veech generators on H_1.
    Monodromy { origami: String },
    /// Covering whose exponent is the given rational in [0, 1].
    ConstructRational {
        /// A fraction `p/q`.
        lambda: String,
    },
    /// Compares two modular embeddings given as JSON files.
    Commensurable { a: String, b: String },
    /// Exponent of one modular embedding with its cusp-by-cusp derivation.
    Lyapunov { embedding: String },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let class = e
        .downcast_ref::<Error>()
        .map(Error::class)
        .or_else(|| e.downcast_ref::<StageError>().map(|s| s.error.class()))
        .unwrap_or(ErrorClass::Input);
    match class {
        ErrorClass::Input => 2,
        ErrorClass::Overflow => 3,
        ErrorClass::Internal => 4,
    }
}

fn read_input(arg: &str) -> anyhow::Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        return std::fs::read_to_string(p).with_context(|| format!("reading {arg}"));
    }
    Ok(arg.to_string())
}

fn load_origami(arg: &str) -> anyhow::Result<Origami> {
    match arg {
        "torus" => return Ok(Origami::torus()),
        "l22" | "L22" => return Ok(Origami::l22()),
        "qmod9" | "Qmod9" => return Ok(Origami::qmod9()),
        _ => {}
    }
    Ok(Origami::parse(&read_input(arg)?)?)
}

fn load_embedding(arg: &str, max_cosets: usize) -> anyhow::Result<ModularEmbeddingData> {
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    Ok(ModularEmbeddingData::parse(&text, max_cosets)?)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn cusp_label(c: &CuspClass) -> String {
    format!("{} (width {})", c.point, c.width)
}

fn lyapunov_table(r: &LyapunovReport, out: &mut String) {
    let _ = writeln!(
        out,
        "  {:<16} {:<22} {:<16} {:>6} {:>4}",
        "cusp", "image", "type", "->", "k"
    );
    for row in &r.cusp_table {
        let (to, k) = match row.contribution {
            Contribution::Parabolic { image_cusp, k } => (format!("#{image_cusp}"), k.to_string()),
            Contribution::NoContribution => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "  {:<16} {:<22} {:<16} {:>6} {:>4}",
            cusp_label(&row.cusp),
            row.image.to_string(),
            row.image_type.short(),
            to,
            k
        );
    }
    match (&r.degree, &r.vol_ratio) {
        (Some(d), Some(v)) => {
            let _ = writeln!(out, "  lambda = {v} * {d} = {}", r.lambda);
        }
        _ => {
            let _ = writeln!(out, "  finite image: lambda = {}", r.lambda);
        }
    }
}

fn origin_label(o: &Origin) -> String {
    match o {
        Origin::Tautological => "tautological".into(),
        Origin::Pullback { degree, genus, .. } => format!("pullback d={degree} g={genus}"),
        Origin::Deck { order, divisor } => format!("deck order {order}, Phi_{divisor}"),
        Origin::Complement => "complement".into(),
    }
}

fn analysis_table(a: &Analysis) -> String {
    let mut out = String::new();
    let o = &a.origami;
    let _ = writeln!(
        out,
        "origami    d={}  r={}  u={}",
        o.degree(),
        o.r().to_cycle_string(),
        o.u().to_cycle_string()
    );
    let _ = writeln!(
        out,
        "stratum    {}, punctures {}",
        a.stratum, a.stratum.punctures
    );
    let cusps: Vec<String> = a.veech.subgroup.cusps().iter().map(cusp_label).collect();
    let _ = writeln!(
        out,
        "veech      index {}; cusps {}",
        a.veech.index(),
        cusps.join(", ")
    );
    let _ = writeln!(
        out,
        "homology   genus {}, radical {}, {} generators",
        a.rep.genus,
        a.rep.radical_dim,
        a.rep.generators.len()
    );
    let _ = writeln!(
        out,
        "\n  {:<3} {:<28} {:>3} {:>7} {:>7} {:>7} {:>9}",
        "#", "piece", "dim", "domain", "lambda", "degree", "vol"
    );
    for (i, p) in a.pieces.iter().enumerate() {
        let dom = p
            .rank2
            .as_ref()
            .map_or("-".into(), |r| r.domain.index().to_string());
        let lam = p.lambda().map_or("n/a".into(), ToString::to_string);
        let (deg, vol) = p.report.as_ref().map_or(("-".into(), "-".into()), |r| {
            (
                r.degree.map_or("-".into(), |d| d.to_string()),
                r.vol_ratio.as_ref().map_or("-".into(), ToString::to_string),
            )
        });
        let _ = writeln!(
            out,
            "  {:<3} {:<28} {:>3} {:>7} {:>7} {:>7} {:>9}",
            i,
            origin_label(&p.origin),
            p.subspace.dim(),
            dom,
            lam,
            deg,
            vol
        );
    }
    for (i, p) in a.pieces.iter().enumerate() {
        if let Some(r) = &p.report {
            let _ = writeln!(out, "\npiece {i}:");
            lyapunov_table(r, &mut out);
        }
    }
    let spec: Vec<String> = a.full_spectrum().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "\nspectrum   {}", spec.join(", "));
    out
}

fn veech_table(v: &VeechGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "index      {}", v.index());
    let _ = writeln!(out, "sigma_S    {}", v.subgroup.sigma_s().to_cycle_string());
    let _ = writeln!(out, "sigma_T    {}", v.subgroup.sigma_t().to_cycle_string());
    for c in v.subgroup.cusps() {
        let _ = writeln!(out, "cusp       {}  rep {}", cusp_label(&c), c.rep_word);
    }
    for (w, m) in &v.schreier_gens {
        let _ = writeln!(out, "generator  {w:<24} {m}");
    }
    out
}

fn monodromy_table(r: &SymplecticRep) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "genus {}, radical {}", r.genus, r.radical_dim);
    for g in &r.generators {
        let _ = writeln!(out, "\n{}:", g.word);
        for i in 0..g.matrix.rows() {
            let row: Vec<String> = (0..g.matrix.cols())
                .map(|j| format!("{:>4}", g.matrix[(i, j)]))
                .collect();
            let _ = writeln!(out, "  {}", row.join(" "));
        }
    }
    out
}

fn construction_table(lambda: &str, c: &Construction) -> String {
    let mut out = String::new();
    match c {
        Construction::ConstantFamily => {
            let _ = writeln!(out, "lambda {lambda}: constant family, no covering");
        }
        Construction::Covering { spec, certificate } => {
            let p = &spec.params;
            let _ = writeln!(
                out,
                "lambda {lambda}: r = {}, d = {}, t = {:?}",
                p.r, p.d, p.t
            );
            for b in &spec.points {
                let _ = writeln!(out, "  sigma_{:<4} {}", b.label, b.sigma.to_cycle_string());
            }
            let _ = writeln!(
                out,
                "certificate: chi = {}, genus = {}, cusps = {}, lambda = {}",
                certificate.euler_characteristic,
                certificate.genus,
                certificate.cusps,
                certificate.lambda
            );
        }
    }
    out
}

fn commensurability_table(r: &CommensurabilityReport) -> String {
    let mut out = String::new();
    let v = |x| {
        serde_json::to_value(x)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default()
    };
    let _ = writeln!(out, "commensurable          {}", v(r.commensurable));
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "witness                {}: {} vs {}",
            w.word, w.type1, w.type2
        );
    }
    let _ = writeln!(out, "weakly commensurable   {}", v(r.weakly_commensurable));
    for (i, inv) in r.invariants.iter().enumerate() {
        let _ = writeln!(
            out,
            "embedding {}            lambda {}, cusp images {:?}",
            i + 1,
            inv.lambda,
            inv.cusp_image_profile
        );
    }
    out
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let limits = Limits {
        max_orbit: cli.max_orbit,
        max_cosets: cli.max_cosets,
    };
    let table = cli.format == Format::Table;
    Ok(match &cli.command {
        Command::Analyze { origami } => {
            let a = analyze(&load_origami(origami)?, limits, exec)?;
            if table {
                analysis_table(&a)
            } else {
                json(&a.to_json())
            }
        }
        Command::Veech { origami } => {
            let v = veech_group(&load_origami(origami)?, cli.max_orbit)?;
            if table {
                veech_table(&v)
            } else {
                json(&v.to_json())
            }
        }
        Command::Monodromy { origami } => {
            let v = veech_group(&load_origami(origami)?, cli.max_orbit)?;
            let r = homology_rep(&v, exec)?;
            if table {
                monodromy_table(&r)
            } else {
                json(&r.to_json())
            }
        }
        Command::ConstructRational { lambda } => {
            let l = parse_rational(lambda)?;
            let c = construct(&l)?;
            if table {
                construction_table(&l.to_string(), &c)
            } else {
                json(&c.to_json(&l))
            }
        }
        Command::Commensurable { a, b } => {
            let (d1, d2) = (
                load_embedding(a, cli.max_cosets)?,
                load_embedding(b, cli.max_cosets)?,
            );
            let r = compare(&d1, &d2, cli.max_cosets)?;
            if table {
                commensurability_table(&r)
            } else {
                json(&r)
            }
        }
        Command::Lyapunov { embedding } => {
            let d = load_embedding(embedding, cli.max_cosets)?;
            let r = lyapunov_exponent(&d, cli.max_cosets)?;
            if table {
                let mut out = String::new();
                lyapunov_table(&r, &mut out);
                out
            } else {
                json(&r.to_json())
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
