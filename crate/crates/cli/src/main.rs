use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ultrametric::balls::{enumerate_balls, gamma_is_tree, GammaGraph};
use ultrametric::characterize::{
    complete_star, distinct_weight_spanning_star, hamiltonian_decreasing_path,
    star_determination_check,
};
use ultrametric::generate::{generate, GenKind};
use ultrametric::io::{self, Format};
use ultrametric::oracle::{
    oracle_ham_paths, oracle_isometries, oracle_weaksim, HAM_PATH_CAP, ISOMETRY_CAP, WEAKSIM_CAP,
};
use ultrametric::report::{
    certificates_value, gamma_value, iso_value, rigidity_value, spectrum_value, validation_value,
};
use ultrametric::rigidity::is_max_rigid;
use ultrametric::weaksim::weakly_similar;
use ultrametric::{Dist, Error, ReprTree, Space};

/// Analysis of finite ultrametric spaces.
///
/// Exit status: 0 on success, 1 when an internal consistency check fails,
/// 2 on bad input or usage.
#[derive(Parser)]
#[command(name = "ultra", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a distance table as invalid, metric or ultrametric.
    Validate { file: String },
    /// Build the representing tree.
    Tree {
        file: String,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// List all balls.
    Balls { file: String },
    /// Build the ball graph and test whether it is a tree.
    Gamma {
        file: String,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Isometry group: order, generators, orbits.
    Iso { file: String },
    /// Full analysis report.
    Rigidity { file: String },
    /// Decide maximal rigidity with all three criteria.
    CheckR { file: String },
    /// Find a Hamiltonian path with strictly decreasing weights.
    HamPath { file: String },
    /// Find a spanning star with distinct weights.
    Star { file: String },
    /// Complete a weighted star to an ultrametric.
    CompleteStar {
        /// Center point name.
        #[arg(long)]
        center: String,
        /// Rays as NAME=WEIGHT.
        #[arg(required = true)]
        rays: Vec<String>,
    },
    /// Decide weak similarity of two spaces.
    Weaksim { a: String, b: String },
    /// Generate a random space.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long, env = "ULTRA_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Exhaustive brute-force searches for small spaces.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// All self-isometries (at most 8 points).
    Isometries { file: String },
    /// All Hamiltonian paths (at most 8 points).
    HamPaths {
        file: String,
        /// Keep only paths with strictly decreasing weights.
        #[arg(long)]
        decreasing: bool,
    },
    /// Weak similarity of two metric spaces (at most 7 points).
    Weaksim { a: String, b: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    ChainR,
    RandomTree,
    RandomMetricNonultra,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Inconsistent(_) => Failure::Inconsistent(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn load(path: &str) -> Result<Space, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    io::parse(&text, Format::from_path(path)).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn names(space: &Space, points: &[usize]) -> String {
    let v: Vec<&str> = points.iter().map(|&p| space.name(p)).collect();
    format!("{{{}}}", v.join(","))
}

fn validate(space: &Space) -> Outcome {
    let v = validation_value(space);
    let mut text = format!("kind: {}\n", v["kind"].as_str().unwrap_or_default());
    if let Some((x, y, z)) = space.validate().witness {
        text += &format!(
            "witness: ({}, {}, {})\nviolating triples: {}\n",
            space.name(x),
            space.name(y),
            space.name(z),
            v["violations"]
        );
    }
    Ok((v, text))
}

fn tree_text(tree: &ReprTree) -> String {
    fn go(tree: &ReprTree, v: usize, depth: usize, out: &mut String) {
        let node = tree.node(v);
        let leaves: Vec<&str> = node.leaves.iter().map(|&p| tree.names()[p].as_str()).collect();
        out.push_str(&format!(
            "{}label={} {{{}}}\n",
            "  ".repeat(depth),
            node.label,
            leaves.join(",")
        ));
        for &c in &node.children {
            go(tree, c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(tree, tree.root(), 0, &mut out);
    out
}

fn tree(space: &Space, dot: bool) -> Outcome {
    space.require_ultrametric()?;
    let tree = ReprTree::build(space)?;
    let value = json!({
        "tree": io::tree_to_value(&tree),
        "canonical_code": tree.canonical_code().0,
        "nodes": tree.nodes().len(),
        "inner_nodes": tree.inner_nodes().count(),
    });
    let text = if dot { io::tree_to_dot(&tree) } else { tree_text(&tree) };
    Ok((value, text))
}

fn balls(space: &Space) -> Outcome {
    let balls = enumerate_balls(space);
    let list: Vec<Vec<&str>> = balls
        .iter()
        .map(|b| b.members().iter().map(|&p| space.name(p)).collect())
        .collect();
    let mut text = format!("{} balls\n", balls.len());
    for b in &balls {
        text += &format!("{}\n", names(space, b.members()));
    }
    Ok((json!({ "count": balls.len(), "balls": list }), text))
}

fn gamma(space: &Space, dot: bool) -> Outcome {
    let graph = GammaGraph::new(space);
    let stats = gamma_is_tree(space)?;
    let mut value = gamma_value(space)?;
    value["edge_list"] = io::gamma_to_value(space, &graph)["edges"].clone();
    let text = if dot {
        io::gamma_to_dot(space, &graph)
    } else {
        format!(
            "vertices: {}\nedges: {}\nis_tree: {}\n",
            stats.vertices, stats.edges, stats.is_tree
        )
    };
    Ok((value, text))
}

fn iso(space: &Space) -> Outcome {
    space.require_ultrametric()?;
    let v = iso_value(space)?;
    let mut text = format!("order: {}\n", v["order"].as_str().unwrap_or_default());
    let group = ultrametric::rigidity::isometry_group(space)?;
    let gens: Vec<String> = group.generators.iter().map(|g| g.display_with(space)).collect();
    let orbits: Vec<String> = group.orbits.iter().map(|o| names(space, o)).collect();
    text += &format!("generators: {}\n", gens.join(" "));
    text += &format!("orbits: {}\n", orbits.join(" "));
    Ok((v, text))
}

fn check_r(space: &Space) -> Outcome {
    space.require_ultrametric()?;
    let report = is_max_rigid(space)?;
    let text = format!(
        "in_R: {}\n  min fixed points = |X|-2: {} (min_fix={}, |X|={}, witness {})\n  |Iso| = 2: {} (order={})\n  binary chain tree: {}{}\n",
        report.in_r,
        report.min_fix_criterion.holds,
        report.min_fix,
        report.points,
        report.min_fix_criterion.certificate.display_with(space),
        report.order_criterion.holds,
        report.iso_order,
        report.shape_criterion.holds,
        report
            .shape_criterion
            .certificate
            .map(|v| format!(" (fails at node {v})"))
            .unwrap_or_default(),
    );
    Ok((rigidity_value(space, &report), text))
}

fn rigidity(space: &Space) -> Outcome {
    let value = ultrametric::report::analysis_report(space)?;
    let mut text = validate(space)?.1;
    text += &format!("spectrum: {}\n", spectrum_value(space));
    if space.is_ultrametric() {
        text += &tree(space, false)?.1;
        text += &iso(space)?.1;
    }
    text += &gamma(space, false)?.1;
    if space.is_ultrametric() && space.len() >= 2 {
        text += &check_r(space)?.1;
        text += &format!(
            "certificates: {}\n",
            serde_json::to_string_pretty(&certificates_value(space)?).expect("serializable")
        );
    }
    Ok((value, text))
}

fn ham_path(space: &Space) -> Outcome {
    space.require_ultrametric()?;
    let path = hamiltonian_decreasing_path(space)?;
    let value = json!({
        "exists": path.is_some(),
        "points": path.as_ref().map(|p| p.points.iter().map(|&i| space.name(i)).collect::<Vec<_>>()),
        "weights": path.as_ref().map(|p| p.weights.iter().map(Dist::to_string).collect::<Vec<_>>()),
    });
    let text = match &path {
        None => "no strictly decreasing Hamiltonian path\n".to_string(),
        Some(p) => {
            let mut s = space.name(p.points[0]).to_string();
            for (k, w) in p.weights.iter().enumerate() {
                s += &format!(" -{w}- {}", space.name(p.points[k + 1]));
            }
            s + "\n"
        }
    };
    Ok((value, text))
}

fn star(space: &Space) -> Outcome {
    space.require_ultrametric()?;
    let star = distinct_weight_spanning_star(space)?;
    let determines = star_determination_check(space)?;
    let value = json!({
        "exists": star.is_some(),
        "center": star.as_ref().map(|s| space.name(s.center)),
        "rays": star.as_ref().map(|s| s.rays.iter().map(|&(p, w)| json!([space.name(p), w.to_string()])).collect::<Vec<_>>()),
        "determines_space": determines,
    });
    let text = match &star {
        None => "no spanning star with distinct weights\n".to_string(),
        Some(s) => {
            let rays: Vec<String> = s
                .rays
                .iter()
                .map(|&(p, w)| format!("{}={w}", space.name(p)))
                .collect();
            format!(
                "center: {}\nrays: {}\ndetermines space: {determines}\n",
                space.name(s.center),
                rays.join(" ")
            )
        }
    };
    Ok((value, text))
}

fn parse_ray(arg: &str) -> Result<(String, Dist), Failure> {
    let (name, w) = arg
        .split_once('=')
        .ok_or_else(|| Failure::Input(format!("ray {arg:?} is not NAME=WEIGHT")))?;
    let w: Dist = w.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
    Ok((name.to_string(), w))
}

fn complete(center: &str, rays: &[String]) -> Outcome {
    let rays = rays.iter().map(|r| parse_ray(r)).collect::<Result<Vec<_>, _>>()?;
    let c = complete_star(center, &rays)?;
    let value = json!({
        "space": io::space_to_value(&c.space),
        "unique": c.unique,
        "second_completion": c.second_completion.as_ref().map(io::space_to_value),
    });
    let mut text = io::emit(&c.space, Format::Csv);
    text += &format!("unique: {}\n", c.unique);
    if let Some(alt) = &c.second_completion {
        text += "second completion:\n";
        text += &io::emit(alt, Format::Csv);
    }
    Ok((value, text))
}

fn weaksim(x: &Space, y: &Space) -> Outcome {
    x.require_ultrametric()?;
    y.require_ultrametric()?;
    let found = weakly_similar(x, y)?;
    let value = json!({
        "weakly_similar": found.is_some(),
        "phi": found.as_ref().map(|w| {
            (0..x.len())
                .map(|i| (x.name(i).to_string(), json!(y.name(w.phi[i]))))
                .collect::<serde_json::Map<_, _>>()
        }),
        "f": found.as_ref().map(|w| w.f.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>()),
    });
    let mut text = format!("weakly similar: {}\n", found.is_some());
    if let Some(w) = &found {
        let phi: Vec<String> = (0..x.len())
            .map(|i| format!("{}->{}", x.name(i), y.name(w.phi[i])))
            .collect();
        let f: Vec<String> = w.f.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        text += &format!("phi: {}\nf: {}\n", phi.join(" "), f.join(" "));
    }
    Ok((value, text))
}

fn gen(kind: KindArg, n: usize, seed: u64, format: FormatArg) -> Result<String, Failure> {
    let kind = match kind {
        KindArg::ChainR => GenKind::ChainR,
        KindArg::RandomTree => GenKind::RandomTree,
        KindArg::RandomMetricNonultra => GenKind::RandomMetricNonUltra,
    };
    let space = generate(kind, n, seed)?;
    let format = match format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    Ok(io::emit(&space, format))
}

fn point_lists(space: &Space, lists: &[Vec<usize>]) -> (Value, String) {
    let value: Vec<Vec<&str>> = lists
        .iter()
        .map(|l| l.iter().map(|&p| space.name(p)).collect())
        .collect();
    let text: String = value.iter().map(|l| l.join(" ") + "\n").collect();
    (json!({ "count": lists.len(), "items": value }), format!("{} found\n{text}", lists.len()))
}

fn oracle(which: &OracleCommand) -> Outcome {
    match which {
        OracleCommand::Isometries { file } => {
            let space = load(file)?;
            // each map lists the image of every point, in point order
            Ok(point_lists(&space, &oracle_isometries(&space, ISOMETRY_CAP)?))
        }
        OracleCommand::HamPaths { file, decreasing } => {
            let space = load(file)?;
            Ok(point_lists(&space, &oracle_ham_paths(&space, HAM_PATH_CAP, *decreasing)?))
        }
        OracleCommand::Weaksim { a, b } => {
            let found = oracle_weaksim(&load(a)?, &load(b)?, WEAKSIM_CAP)?;
            Ok((json!({ "weakly_similar": found }), format!("weakly similar: {found}\n")))
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let outcome = match &cli.command {
        Command::Validate { file } => validate(&load(file)?),
        Command::Tree { file, dot } => {
            let out = tree(&load(file)?, *dot)?;
            if *dot {
                return Ok(out.1);
            }
            Ok(out)
        }
        Command::Balls { file } => balls(&load(file)?),
        Command::Gamma { file, dot } => {
            let out = gamma(&load(file)?, *dot)?;
            if *dot {
                return Ok(out.1);
            }
            Ok(out)
        }
        Command::Iso { file } => iso(&load(file)?),
        Command::Rigidity { file } => rigidity(&load(file)?),
        Command::CheckR { file } => check_r(&load(file)?),
        Command::HamPath { file } => ham_path(&load(file)?),
        Command::Star { file } => star(&load(file)?),
        Command::CompleteStar { center, rays } => complete(center, rays),
        Command::Weaksim { a, b } => weaksim(&load(a)?, &load(b)?),
        Command::Gen { kind, n, seed, format } => return gen(*kind, *n, *seed, *format),
        Command::Oracle { which } => oracle(which),
    };
    let (value, text) = outcome?;
    if cli.json {
        Ok(serde_json::to_string_pretty(&value).expect("serializable") + "\n")
    } else {
        Ok(text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
    }
}
