use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use matnet::field::{FieldCtx, Matrix};
use matnet::json::{CodeDocument, MatrixSpec, MatroidSpec, NetworkDocument};
use matnet::matroid::{EnumerationCaps, Graph, Matroid};
use matnet::matroidal::{construct, verify_matroidal, ConstructionConfig};
use matnet::network::{exhaustive_solve, simulate, simulate_all, to_dot, validate_code, GlobalCode, Network, SearchConfig};
use matnet::solver::{
    extract_representable, greedy_mds_vectors, solve_graphic_with, solve_representable, solve_uniform_with,
    uniform_field,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::failure::{describe_report, describe_violation, Failure};
use crate::{
    Cli, Command, ConstructArgs, ExportDotArgs, ExtractArgs, GlobalOpts, MatroidCommand, SearchArgs, SimulateArgs,
    SolveArgs, SolveGraphicArgs, SolveUniformArgs, VerifyArgs,
};

type Outcome = Result<(), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Indented JSON, except that arrays of scalars (vectors, matrix rows,
/// edge lists) stay on one line.
fn layout(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                layout(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                layout(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome {
    let value = serde_json::to_value(value).context("serializing output")?;
    let mut text = String::new();
    layout(&value, 0, &mut text);
    text.push('\n');
    write_text(path, &text)
}

/// Summary line on stdout.
fn report(v: Value) {
    println!("{v}");
}

fn load_network(path: &Path) -> Result<(NetworkDocument, Network), Failure> {
    let doc: NetworkDocument = read_json(path)?;
    let n = doc.network()?;
    Ok((doc, n))
}

fn load_code(path: &Path, n: &Network) -> Result<GlobalCode, Failure> {
    Ok(read_json::<CodeDocument>(path)?.to_code(n)?)
}

fn load_matroid(path: &Path) -> Result<Matroid, Failure> {
    Ok(read_json::<MatroidSpec>(path)?.to_matroid()?)
}

struct Ctx<'a> {
    opts: &'a GlobalOpts,
}

impl Ctx<'_> {
    fn caps(&self) -> EnumerationCaps {
        let mut caps = EnumerationCaps::default();
        if let Some(n) = self.opts.enum_cap {
            caps.enumerate = n;
            caps.axioms = n;
        }
        caps
    }

    fn search_cap(&self) -> u128 {
        self.opts.search_cap.map_or(SearchConfig::default().cap, u128::from)
    }

    fn note(&self, msg: impl FnOnce() -> String) {
        if self.opts.verbose > 0 {
            eprintln!("matnet: {}", msg());
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx { opts: &cli.opts };
    match &cli.command {
        Command::Matroid(MatroidCommand::Check { matroid, out }) => matroid_check(&ctx, matroid, out.as_deref()),
        Command::Construct(a) => construct_cmd(&ctx, a),
        Command::Solve(a) => solve(&ctx, a),
        Command::SolveUniform(a) => solve_uniform_cmd(&ctx, a),
        Command::SolveGraphic(a) => solve_graphic_cmd(&ctx, a),
        Command::Extract(a) => extract(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Simulate(a) => simulate_cmd(&ctx, a),
        Command::Search(a) => search(&ctx, a),
        Command::ExportDot(a) => export_dot(a),
    }
}

fn matroid_check(ctx: &Ctx, path: &Path, out: Option<&Path>) -> Outcome {
    let m = load_matroid(path)?;
    let caps = ctx.caps();
    let axioms = m.verify_axioms(&caps)?;
    let circuits = m.circuits(&caps)?;
    let bases = m.bases(&caps)?;
    let full = json!({
        "ground_size": m.ground_size(),
        "rank": m.full_rank(),
        "axioms_hold": axioms.holds(),
        "axioms": axioms,
        "circuits": circuits,
        "bases": bases,
    });
    match out {
        Some(out) => {
            write_json(out, &full)?;
            report(json!({
                "ground_size": m.ground_size(),
                "rank": m.full_rank(),
                "axioms_hold": axioms.holds(),
                "circuits": circuits.len(),
                "bases": bases.len(),
            }));
        }
        None => report(full),
    }
    if !axioms.holds() {
        return Err(Failure::verification("matroid axioms fail", json!(axioms)));
    }
    Ok(())
}

fn construct_cmd(ctx: &Ctx, a: &ConstructArgs) -> Outcome {
    let m = load_matroid(&a.matroid)?;
    let mut cfg: ConstructionConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => ConstructionConfig::default(),
    };
    if ctx.opts.enum_cap.is_some() {
        cfg.caps = ctx.caps();
    }
    if let Some(alphabet) = a.alphabet {
        cfg.alphabet_size = alphabet;
    }
    if let Some(base) = &a.base {
        cfg.base = Some(base.clone());
    }
    let c = construct(&m, &cfg)?;
    ctx.note(|| format!("constructed {} nodes, {} edges", c.network.nodes().len(), c.network.edges().len()));
    write_json(&a.out, &NetworkDocument::from_construction(&c))?;
    let violation = verify_matroidal(&c.network, &m, &c.mapping)?;
    let t = &c.trace;
    report(json!({
        "messages": c.network.message_count(),
        "nodes": c.network.nodes().len(),
        "edges": c.network.edges().len(),
        "base": t.base,
        "relays": t.relays.len(),
        "circuit_receivers": t.circuit_receivers.len(),
        "base_receivers": t.base_receivers.len(),
        "truncated": t.truncated,
        "matroidal": violation.is_none(),
    }));
    match violation {
        Some(v) => Err(Failure::verification(describe_violation(&c.network, &v), json!(v))),
        None => Ok(()),
    }
}

/// The representation a matroid spec carries or has by construction:
/// the matrix of a vector matroid, the incidence matrix over GF(2) of a
/// graph, and greedy MDS vectors over the smallest sufficient GF(2^l) for
/// a uniform matroid.
fn standard_representation(spec: &MatroidSpec) -> Result<Matrix, Failure> {
    Ok(match spec {
        MatroidSpec::Vector { .. } => spec.matrix().expect("vector kind")?,
        MatroidSpec::Graphic { .. } => spec.graph().expect("graphic kind")?.incidence_matrix(&FieldCtx::prime(2)?),
        &MatroidSpec::Uniform { c, d } => {
            if c > d {
                return Err(anyhow!("uniform matroid needs c <= d, got U({c},{d})").into());
            }
            let field = uniform_field(c, d, 2, 2)?;
            if c == 0 {
                Matrix::zeros(&field, 0, d)
            } else {
                let order: Vec<usize> = (0..d).collect();
                let columns = greedy_mds_vectors(&field, c, &order).expect("the field meets the counting bound");
                Matrix::from_columns(&field, c, &columns)?
            }
        }
        MatroidSpec::Explicit { .. } => {
            return Err(anyhow!("explicit matroids carry no representation; pass --matrix").into());
        }
    })
}

fn solve(ctx: &Ctx, a: &SolveArgs) -> Outcome {
    let (doc, n) = load_network(&a.network)?;
    let f = doc.mapping()?;
    let matrix = match (&a.matrix, &a.matroid) {
        (Some(p), _) => read_json::<MatrixSpec>(p)?.to_matrix()?,
        (None, Some(p)) => standard_representation(&read_json(p)?)?,
        (None, None) => return Err(anyhow!("pass --matrix or --matroid").into()),
    };
    let s = solve_representable(&n, &f, &matrix)?;
    ctx.note(|| format!("solved over {} with {} dummy messages", s.field.name(), s.dummy_messages));
    write_json(&a.out, &CodeDocument::from_code(&n, &s.code))?;
    report(json!({ "field": s.field.name(), "dummy_messages": s.dummy_messages, "solution": true }));
    Ok(())
}

fn solve_uniform_cmd(ctx: &Ctx, a: &SolveUniformArgs) -> Outcome {
    let cfg = ConstructionConfig { alphabet_size: a.alphabet, caps: ctx.caps(), ..Default::default() };
    let s = solve_uniform_with(a.c, a.d, a.characteristic, &cfg)?;
    let n = &s.construction.network;
    if let Some(p) = &a.network_out {
        write_json(p, &NetworkDocument::from_construction(&s.construction))?;
    }
    write_json(&a.out, &CodeDocument::from_code(n, &s.result.code))?;
    report(json!({
        "field": s.result.field.name(),
        "nodes": n.nodes().len(),
        "edges": n.edges().len(),
        "representation": MatrixSpec::from_matrix(&s.representation),
        "solution": true,
    }));
    Ok(())
}

fn solve_graphic_cmd(ctx: &Ctx, a: &SolveGraphicArgs) -> Outcome {
    let raw: Graph = read_json(&a.graph)?;
    let g = Graph::new(raw.vertices, raw.edges)?;
    let cfg = ConstructionConfig { alphabet_size: a.alphabet, caps: ctx.caps(), ..Default::default() };
    let s = solve_graphic_with(&g, &cfg)?;
    let n = &s.construction.network;
    if let Some(p) = &a.network_out {
        write_json(p, &NetworkDocument::from_construction(&s.construction))?;
    }
    write_json(&a.out, &CodeDocument::from_code(n, &s.result.code))?;
    report(json!({
        "field": s.result.field.name(),
        "tree": s.tree,
        "nodes": n.nodes().len(),
        "edges": n.edges().len(),
        "solution": true,
    }));
    Ok(())
}

fn extract(ctx: &Ctx, a: &ExtractArgs) -> Outcome {
    let (_, n) = load_network(&a.network)?;
    let code = load_code(&a.code, &n)?;
    let (matrix, f) = extract_representable(&n, &code)?;
    ctx.note(|| format!("extracted a {}x{} matrix", matrix.rows(), matrix.cols()));
    write_json(&a.out, &MatrixSpec::from_matrix(&matrix))?;
    if let Some(p) = &a.network_out {
        write_json(p, &NetworkDocument::with_mapping(&n, &f))?;
    }
    let violation = verify_matroidal(&n, &Matroid::vector(matrix.clone()), &f)?;
    report(json!({ "rows": matrix.rows(), "cols": matrix.cols(), "field": matrix.field().name(), "matroidal": violation.is_none() }));
    match violation {
        Some(v) => Err(Failure::verification(describe_violation(&n, &v), json!(v))),
        None => Ok(()),
    }
}

fn verify(_ctx: &Ctx, a: &VerifyArgs) -> Outcome {
    let (doc, n) = load_network(&a.network)?;
    let mut summary = Map::new();
    let mut details = Map::new();
    let mut problems = Vec::new();
    let matroid = match (&a.matroid, &a.matrix) {
        (Some(p), _) => Some(load_matroid(p)?),
        (None, Some(p)) => Some(Matroid::vector(read_json::<MatrixSpec>(p)?.to_matrix()?)),
        (None, None) => None,
    };
    if let Some(m) = matroid {
        let violation = verify_matroidal(&n, &m, &doc.mapping()?)?;
        summary.insert("matroidal".into(), json!(violation.is_none()));
        if let Some(v) = violation {
            problems.push(describe_violation(&n, &v));
            details.insert("matroidal".into(), json!(v));
        }
    }
    if let Some(p) = &a.code {
        let code = load_code(p, &n)?;
        let r = validate_code(&n, &code)?;
        summary.insert("valid".into(), json!(r.valid));
        summary.insert("satisfied".into(), json!(r.satisfied.len()));
        summary.insert("unsatisfied".into(), json!(r.unsatisfied.len()));
        summary.insert("solution".into(), json!(r.is_solution()));
        if !r.is_solution() {
            problems.extend(describe_report(&n, &r));
            details.insert("code".into(), json!(r));
        }
    }
    report(Value::Object(summary));
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(problems.join("; "), Value::Object(details)))
    }
}

fn simulate_cmd(ctx: &Ctx, a: &SimulateArgs) -> Outcome {
    let (_, n) = load_network(&a.network)?;
    let code = load_code(&a.code, &n)?;
    if a.all {
        let limit = u64::try_from(ctx.search_cap()).unwrap_or(u64::MAX);
        let sim = simulate_all(&n, &code, limit)?;
        report(json!(sim));
        if !sim.all_decoded() {
            return Err(Failure::verification(
                format!("{} of {} assignments fail to decode", sim.failures, sim.assignments),
                json!(sim),
            ));
        }
        return Ok(());
    }
    let raw = a.assignment.as_deref().unwrap_or_default();
    let assignment = code.field().vector_from_indices(raw)?;
    let sim = simulate(&n, &code, &assignment)?;
    report(json!({ "assignment": raw, "edge_symbols": sim.edge_symbols, "decoded": sim.decoded }));
    let wrong: Vec<String> = sim
        .decoded
        .iter()
        .filter(|d| !d.is_correct())
        .map(|d| format!("node {} decodes {} wrongly", d.node, n.messages()[d.message]))
        .collect();
    if wrong.is_empty() {
        Ok(())
    } else {
        Err(Failure::verification(wrong.join("; "), json!(sim.decoded)))
    }
}

fn search(ctx: &Ctx, a: &SearchArgs) -> Outcome {
    let (_, n) = load_network(&a.network)?;
    let field: FieldCtx = a.field.parse()?;
    let cfg = SearchConfig { cap: a.cap.map_or(ctx.search_cap(), u128::from), jobs: a.jobs.max(1) };
    ctx.note(|| format!("searching over {} with {} job(s)", field.name(), cfg.jobs));
    match exhaustive_solve(&n, &field, &cfg)? {
        Some(code) => {
            let doc = CodeDocument::from_code(&n, &code);
            match &a.out {
                Some(p) => {
                    write_json(p, &doc)?;
                    report(json!({ "field": field.name(), "result": "solution" }));
                }
                None => report(json!({ "field": field.name(), "result": "solution", "code": doc })),
            }
            Ok(())
        }
        None => {
            report(json!({ "field": field.name(), "result": "no solution" }));
            Err(Failure::verification(format!("no solution over {}", field.name()), Value::Null))
        }
    }
}

fn export_dot(a: &ExportDotArgs) -> Outcome {
    let (_, n) = load_network(&a.network)?;
    let code = a.code.as_deref().map(|p| load_code(p, &n)).transpose()?;
    let dot = to_dot(&n, code.as_ref());
    match &a.out {
        Some(p) => write_text(p, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}
