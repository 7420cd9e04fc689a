use std::fmt;
use std::path::Path;

use num_traits::ToPrimitive;
use tourney::colorability::{acyclic_k_coloring, acyclic_k_coloring_with, chromatic_number_with, classify, nae_two_coloring_with, Class, Coloring};
use tourney::digraph::{copy_count, Digraph};
use tourney::format::{self, GraphFormat};
use tourney::forcing::{build_forcing, certify_completion, forcing_counterexample, gamma, search_min_forcing};
use tourney::hardness::{audit_reduction, check_reduction, lift, reduce, verify_gadget, Role};
use tourney::lowerbound::{
    audit_blowup, audit_copy_localization, audit_rs, behrend, blowup_tournament, farness_certificate, hard_pattern,
    is_ap_free, rs_graph,
};
use tourney::orderedhom::{core_family_with, is_ordered_core, odd_cycle_certificate, ordered_core_with, LabeledGraph};
use tourney::regularity::{afn_partition, strong_decomposition, AfnOutcome, BinaryMatrix, DecompositionLimits, DecompositionOutcome};
use tourney::{distance_to_h_free, Budget, Distance, OrientedGraph, Outcome, Rational, Tournament};

use crate::report::{vertices, Report, Status};
use crate::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 3,
            Failure::Budget(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl From<tourney::Error> for Failure {
    fn from(e: tourney::Error) -> Self {
        match e {
            tourney::Error::BudgetExhausted { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn load<T>(path: &Path, parse: impl Fn(&str) -> tourney::Result<T>) -> Res<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, report: &mut Report) -> Res<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))?;
        report.put("written", p.display());
    }
    Ok(())
}

fn side_file(path: Option<&Path>, ext: &str, text: &str, report: &mut Report) -> Res<()> {
    if let Some(p) = path {
        let mut name = p.as_os_str().to_owned();
        name.push(ext);
        let side = std::path::PathBuf::from(name);
        std::fs::write(&side, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", side.display())))?;
        report.put("side_file", side.display());
    }
    Ok(())
}

fn coloring_data(report: &mut Report, c: &Coloring) {
    report.list("colors", c.colors().iter().map(|x| x + 1));
    report.put("classes", c);
}

fn labeled_data(report: &mut Report, prefix: &str, g: &LabeledGraph) {
    report.list(&format!("{prefix}_labels"), g.labels());
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    report.put(&format!("{prefix}_edges"), edges.join(" "));
}

pub fn run(cli: &Cli) -> Res<Report> {
    let mut budget = Budget::from_option(cli.budget);
    let fmt_out = cli.format;
    match &cli.command {
        Command::Color { input, k } => color(input, *k, &mut budget),
        Command::Chromatic { input } => chromatic(input, &mut budget),
        Command::Classify { pattern } => classify_cmd(pattern),
        Command::Count { host, pattern } => count(host, pattern),
        Command::Distance { host, pattern } => distance(host, pattern, cli.budget),
        Command::Core { input, emit } => core(input, emit.as_deref(), &mut budget),
        Command::Kofh { pattern, emit } => kofh(pattern, emit.as_deref(), &mut budget),
        Command::ForcingBuild { pattern, m, emit } => forcing_build(pattern, *m, cli.seed, emit.as_deref(), &mut budget),
        Command::ForcingCheck { forcing, pattern, emit } => forcing_check(forcing, pattern, emit.as_deref(), fmt_out),
        Command::ForcingSearch { pattern, m_max, emit } => forcing_search(pattern, *m_max, emit.as_deref(), &mut budget),
        Command::Regularity {
            input,
            pattern,
            delta,
            max_classes,
            strong,
        } => regularity(input, pattern, delta, *max_classes, *strong, cli.seed),
        Command::Behrend { n_max } => behrend_cmd(*n_max),
        Command::Rsgraph { k, cycle, n_max } => rsgraph(*k, cycle, *n_max),
        Command::Blowup {
            pattern,
            n,
            n_max,
            emit,
            farness,
            mutated,
        } => blowup(pattern, *n, *n_max, cli.seed, emit.as_deref(), *farness, mutated.as_deref(), fmt_out, &mut budget),
        Command::AuditCopies { pattern, n, n_max } => audit_copies(pattern, *n, *n_max, cli.seed, &mut budget),
        Command::GadgetVerify => gadget_verify(),
        Command::Reduce { graph, emit } => reduce_cmd(graph, emit.as_deref(), fmt_out),
        Command::CheckReduction { graph } => check_reduction_cmd(graph, &mut budget),
        Command::Lift { input, k, emit, verify } => lift_cmd(input, *k, emit.as_deref(), *verify, fmt_out, &mut budget),
    }
}

fn color(input: &Path, k: usize, budget: &mut Budget) -> Res<Report> {
    let g = load(input, format::parse_oriented)?;
    let mut r = Report::new("color");
    r.put("vertices", g.order());
    r.put("k", k);
    let outcome = match Tournament::from_oriented(g.clone()) {
        Ok(t) if k == 2 => nae_two_coloring_with(&t, budget),
        _ => acyclic_k_coloring_with(&g, k, budget),
    };
    match outcome {
        Outcome::Found(c) => {
            r.line(format!("acyclic {k}-coloring found: {c}"));
            r.put("colorable", true);
            coloring_data(&mut r, &c);
        }
        Outcome::Infeasible => {
            r.line(format!("no acyclic {k}-coloring exists"));
            r.put("colorable", false);
            r.status = Status::Negative;
        }
        Outcome::Exhausted { nodes } => {
            r.line(format!("search stopped after {nodes} nodes"));
            r.put("nodes", nodes);
            r.status = Status::Exhausted;
        }
    }
    Ok(r)
}

fn chromatic(input: &Path, budget: &mut Budget) -> Res<Report> {
    let g = load(input, format::parse_oriented)?;
    let mut r = Report::new("chromatic");
    r.put("vertices", g.order());
    match chromatic_number_with(&g, budget) {
        Outcome::Found((chi, c)) => {
            r.line(format!("acyclic chromatic number {chi}: {c}"));
            r.put("chromatic_number", chi);
            coloring_data(&mut r, &c);
        }
        Outcome::Infeasible => return Err(Failure::Input("no coloring exists".into())),
        Outcome::Exhausted { nodes } => {
            r.line(format!("search stopped after {nodes} nodes"));
            r.put("nodes", nodes);
            r.status = Status::Exhausted;
        }
    }
    Ok(r)
}

fn classify_cmd(pattern: &Path) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let mut r = Report::new("classify");
    r.put("vertices", h.order());
    match classify(&h) {
        Class::Easy => {
            r.line("easy: the pattern is 2-colorable, so testing for it needs polynomially many queries");
            r.put("class", "easy");
            if let Some(c) = acyclic_k_coloring(&h, 2) {
                coloring_data(&mut r, &c);
            }
        }
        Class::Hard => {
            r.line("hard: the pattern is not 2-colorable, so testing for it needs super-polynomially many queries");
            r.put("class", "hard");
        }
    }
    Ok(r)
}

fn count(host: &Path, pattern: &Path) -> Res<Report> {
    let g = load(host, format::parse_oriented)?;
    let h = load(pattern, format::parse_oriented)?;
    let c = copy_count(&g, &h);
    let mut r = Report::new("count");
    r.line(format!("{} copies ({} embeddings, {} automorphisms)", c.unlabeled, c.labeled, c.automorphisms));
    r.put("host_vertices", g.order());
    r.put("pattern_vertices", h.order());
    r.put("embeddings", c.labeled);
    r.put("automorphisms", c.automorphisms);
    r.put("copies", c.unlabeled);
    if c.unlabeled == 0 {
        r.status = Status::Negative;
    }
    Ok(r)
}

fn distance(host: &Path, pattern: &Path, budget: Option<u64>) -> Res<Report> {
    let t = load(host, format::parse_tournament)?;
    let h = load(pattern, format::parse_oriented)?;
    let n = t.order();
    let mut r = Report::new("distance");
    r.put("vertices", n);
    match distance_to_h_free(&t, &h, budget) {
        Distance::Exact(d) => {
            r.line(format!("{d} reversals make the tournament pattern-free"));
            r.put("distance", d);
            if n > 0 {
                r.ratio("distance_fraction", Rational::new(d as i64, (n * n) as i64));
            }
        }
        Distance::Exhausted { lower_bound } => {
            r.line(format!("budget exhausted; at least {lower_bound} reversals needed"));
            r.put("lower_bound", lower_bound);
            r.status = Status::Exhausted;
        }
        Distance::Unavoidable => {
            r.line("every tournament of this order contains the pattern");
            r.put("unavoidable", true);
            r.status = Status::Negative;
        }
    }
    Ok(r)
}

fn core(input: &Path, out: Option<&Path>, budget: &mut Budget) -> Res<Report> {
    let g = load(input, format::parse_labeled)?;
    let mut r = Report::new("core");
    match ordered_core_with(&g, budget) {
        Outcome::Found(c) => {
            r.line(format!("ordered core has {} of {} vertices", c.order(), g.order()));
            r.put("input_order", g.order());
            r.put("core_order", c.order());
            r.put("already_core", c.order() == g.order());
            r.put("verified_core", is_ordered_core(&c));
            labeled_data(&mut r, "core", &c);
            emit(out, &format::write_labeled(&c), &mut r)?;
        }
        Outcome::Infeasible => return Err(Failure::Input("core search failed".into())),
        Outcome::Exhausted { nodes } => {
            r.line(format!("search stopped after {nodes} nodes"));
            r.status = Status::Exhausted;
        }
    }
    Ok(r)
}

fn kofh(pattern: &Path, out: Option<&Path>, budget: &mut Budget) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let mut r = Report::new("kofh");
    let family = match core_family_with(&h, budget) {
        Outcome::Found(f) => f,
        Outcome::Infeasible => return Err(Failure::Input("empty core family".into())),
        Outcome::Exhausted { nodes } => {
            r.line(format!("{nodes} labelings exceed the budget"));
            r.status = Status::Exhausted;
            return Ok(r);
        }
    };
    let i = family.select_k_index();
    let k = &family.members[i];
    r.line(format!(
        "{} labelings, {} distinct cores; K(H) has {} vertices and {} edges",
        family.labelings,
        family.members.len(),
        k.core.order(),
        k.core.edge_count()
    ));
    r.put("labelings", family.labelings);
    r.put("family_size", family.members.len());
    r.put("antisymmetry_violations", family.antisymmetry_violations().len());
    r.put("k_index", i + 1);
    labeled_data(&mut r, "k", &k.core);
    r.list("witness", &k.witness);
    r.put("k_chromatic_number", k.core.chromatic_number());
    if k.core.bipartition().is_none() {
        let cycle = odd_cycle_certificate(&k.core)?;
        r.list("odd_cycle", &cycle);
    }
    emit(out, &format::write_labeled(&k.core), &mut r)?;
    Ok(r)
}

fn forcing_build(pattern: &Path, m: usize, seed: u64, out: Option<&Path>, budget: &mut Budget) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let (coloring, d) = match classify(&h) {
        Class::Easy => {
            let c = acyclic_k_coloring(&h, 2).expect("easy patterns are 2-colorable");
            let k = c.num_colors();
            (c, OrientedGraph::new(k))
        }
        Class::Hard => {
            let p = hard_pattern(&h, budget)?;
            (p.coloring, p.d)
        }
    };
    let build = build_forcing(&h, &coloring, &d, m, seed)?;
    let f = &build.f;
    let mut r = Report::new("forcing-build");
    r.line(format!("{} parts of size {m}, {} coin flips", f.parts(), build.coins));
    r.put("parts", f.parts());
    r.put("part_size", m);
    r.put("random_part_pairs", build.random_part_pairs);
    r.put("coins", build.coins);
    coloring_data(&mut r, &coloring);
    let completion = f.complete_with(|x, y| x < y);
    let cert = certify_completion(f, &completion, &h, &coloring)?;
    r.put("certified_tuples", cert.tuples);
    r.put("certified_copies_in_ordered_completion", cert.copies.len());
    let g = gamma(h.order());
    let target = &cert.target;
    r.put("gamma", format!("{g} ({:e})", g.to_f64().unwrap_or(0.0)));
    r.put("target", format!("{target} ({:e})", target.to_f64().unwrap_or(0.0)));
    emit(out, &format::write_kpartite(f), &mut r)?;
    Ok(r)
}

fn forcing_check(forcing: &Path, pattern: &Path, out: Option<&Path>, fmt_out: GraphFormat) -> Res<Report> {
    let f = load(forcing, format::parse_kpartite)?;
    let h = load(pattern, format::parse_oriented)?;
    let mut r = Report::new("forcing-check");
    r.put("parts", f.parts());
    r.put("part_size", f.part_size());
    r.put("inner_pairs", f.inner_pairs().len());
    match forcing_counterexample(&f, &h)? {
        None => {
            r.line("every completion contains the pattern");
            r.put("forces", true);
        }
        Some(t) => {
            r.line("found a completion without the pattern");
            r.put("forces", false);
            r.status = Status::Negative;
            emit(out, &format::write_tournament(&t, fmt_out), &mut r)?;
        }
    }
    Ok(r)
}

fn forcing_search(pattern: &Path, m_max: usize, out: Option<&Path>, budget: &mut Budget) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let mut r = Report::new("forcing-search");
    match search_min_forcing(&h, m_max, budget)? {
        Outcome::Found(f) => {
            r.line(format!("smallest forcing bipartite tournament has parts of size {}", f.part_size()));
            r.put("part_size", f.part_size());
            r.put("completions_checked", budget.used());
            emit(out, &format::write_kpartite(&f), &mut r)?;
        }
        Outcome::Infeasible => {
            r.line(format!("no forcing tournament with parts of size at most {m_max}"));
            r.status = Status::Negative;
        }
        Outcome::Exhausted { nodes } => {
            r.line(format!("search stopped after {nodes} completions"));
            r.status = Status::Exhausted;
        }
    }
    Ok(r)
}

/// Tournament files carry a `matrix` or `edges` line after the order.
fn load_matrix_or_tournament(path: &Path) -> Res<(BinaryMatrix, Option<Tournament>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let second = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .nth(1);
    let ctx = |e: tourney::Error| Failure::Input(format!("{}: {e}", path.display()));
    if matches!(second, Some("matrix") | Some("edges")) {
        let t = format::parse_tournament(&text).map_err(ctx)?;
        Ok((BinaryMatrix::of_tournament(&t), Some(t)))
    } else {
        Ok((format::parse_matrix(&text).map_err(ctx)?, None))
    }
}

fn classes(parts: &[Vec<usize>]) -> String {
    parts.iter().map(|p| vertices(p)).collect::<Vec<_>>().join(" | ")
}

fn regularity(input: &Path, pattern: &Path, delta: &str, max_classes: usize, strong: bool, seed: u64) -> Res<Report> {
    let (a, t) = load_matrix_or_tournament(input)?;
    let b = load(pattern, format::parse_matrix)?;
    let delta: Rational = delta
        .parse()
        .map_err(|_| Failure::Input(format!("delta `{delta}` is not a fraction")))?;
    let mut r = Report::new("regularity");
    r.put("n", a.dim());
    r.put("pattern_size", b.dim());
    r.ratio("delta", delta);
    if strong {
        let t = t.ok_or_else(|| Failure::Input("the two-level decomposition needs a tournament".into()))?;
        let limits = DecompositionLimits {
            afn_classes: max_classes,
            ..DecompositionLimits::default()
        };
        match strong_decomposition(&t, &b, delta, seed, limits)? {
            DecompositionOutcome::Decomposed(d) => {
                r.line(format!(
                    "coarse partition into {} parts, fine into {}, {} sampling attempts",
                    d.q_parts.len(),
                    d.fine_parts.len(),
                    d.attempts
                ));
                r.put("q", d.q_parts.len());
                r.put("fine_parts", d.fine_parts.len());
                r.put("gamma_inverse", d.gamma_inverse);
                r.list("samples", d.samples.iter().map(|v| v + 1));
                r.list("w_sizes", d.w.iter().map(Vec::len));
                r.list("truncated", &d.truncated);
                r.put("attempts", d.attempts);
                r.put("audit_item1_failures", d.audit.item1_failures);
                r.put("audit_item2_failures", d.audit.item2_failures);
                r.ratio("audit_min_w_fraction", d.audit.min_w_fraction);
                r.put("audit_nested", d.audit.nested);
                r.put("audit_passes", d.audit.passes());
                r.put("q_parts", classes(d.q_parts.parts()));
                if !d.audit.passes() {
                    r.status = Status::Negative;
                }
            }
            DecompositionOutcome::Copies { stage, count, rows, cols } => {
                r.line(format!("pass {stage} found {count} off-diagonal copies of the pattern"));
                r.put("stage", stage);
                r.put("copies", count);
                r.put("copy_rows", vertices(&rows));
                r.put("copy_cols", vertices(&cols));
            }
            DecompositionOutcome::Inconclusive { stage, reason } => {
                r.line(format!("pass {stage} inconclusive: {reason}"));
                r.put("stage", stage);
                r.put("reason", reason);
                r.status = Status::Exhausted;
            }
        }
        return Ok(r);
    }
    match afn_partition(&a, &b, delta, max_classes)? {
        AfnOutcome::Partition(p) => {
            r.line(format!("homogeneous partition with {} row and {} column classes", p.rows.len(), p.cols.len()));
            r.put("row_classes", p.rows.len());
            r.put("col_classes", p.cols.len());
            r.ratio("bad_weight", p.bad_weight);
            r.put("homogeneous", p.is_homogeneous());
            r.put("rows", classes(&p.rows));
            r.put("cols", classes(&p.cols));
        }
        AfnOutcome::Copies { count, rows, cols, best } => {
            r.line(format!("class limit reached; the pattern occurs {count} times"));
            r.put("copies", count);
            r.put("copy_rows", vertices(&rows));
            r.put("copy_cols", vertices(&cols));
            r.ratio("best_bad_weight", best.bad_weight);
        }
        AfnOutcome::Inconclusive { best } => {
            r.line("class limit reached and the pattern does not occur");
            r.ratio("best_bad_weight", best.bad_weight);
            r.status = Status::Exhausted;
        }
    }
    Ok(r)
}

fn behrend_cmd(n_max: usize) -> Res<Report> {
    let s = behrend(n_max)?;
    let mut r = Report::new("behrend");
    r.line(format!("{} of 1..={n_max} without a 3-term progression", s.members.len()));
    r.put("n_max", n_max);
    r.put("size", s.members.len());
    r.put("digits", s.digits);
    r.put("base", 2 * s.digits - 1);
    r.put("dimension", s.dimension);
    r.put("radius", s.radius.map_or("any".to_string(), |x| x.to_string()));
    r.put("ap_free", is_ap_free(&s.members));
    r.list("members", &s.members);
    Ok(r)
}

fn rsgraph(k: usize, cycle: &[usize], n_max: usize) -> Res<Report> {
    if cycle.contains(&0) {
        return Err(Failure::Input("cycle indices are 1-based".into()));
    }
    let idx: Vec<usize> = cycle.iter().map(|i| i - 1).collect();
    let g = rs_graph(k, &idx, n_max)?;
    let a = audit_rs(&g);
    let mut r = Report::new("rsgraph");
    r.line(format!("{} vertices, {} cliques, {} edges", a.order, a.cliques, a.edges));
    r.put("order", a.order);
    r.put("part_length", g.part_len());
    r.put("cliques", a.cliques);
    r.put("edges", a.edges);
    r.ratio("delta", a.delta);
    r.put("independent_parts", a.independent_parts);
    r.put("transversal", a.transversal);
    r.put("edge_disjoint", a.edge_disjoint);
    r.put("union_matches", a.union_matches);
    r.put("patterned_cycles", a.patterned_cycles);
    r.put("cycle_bound", a.cycle_bound);
    if !a.structure_ok() || !a.cycles_ok() {
        r.line("audit failed");
        r.status = Status::Negative;
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn blowup(
    pattern: &Path,
    n: usize,
    n_max: usize,
    seed: u64,
    out: Option<&Path>,
    farness: bool,
    mutated: Option<&Path>,
    fmt_out: GraphFormat,
    budget: &mut Budget,
) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let b = blowup_tournament(&h, n, n_max, seed, budget)?;
    let a = audit_blowup(&b)?;
    let mut r = Report::new("blowup");
    r.line(format!(
        "{} vertices over {} base vertices, blocks of {}, {} cliques",
        b.order(),
        b.rs.order(),
        b.block,
        b.rs.cliques().len()
    ));
    r.put("vertices", b.order());
    r.put("truncated", b.truncated);
    r.put("block_size", b.block);
    r.put("base_vertices", b.rs.order());
    r.put("parts", b.rs.k());
    r.put("cliques", b.rs.cliques().len());
    r.list("cycle", b.rs.cycle().iter().map(|i| i + 1));
    r.put("item1_failures", a.item1_failures.len());
    r.put("item2_failures", a.item2_failures);
    r.put("item3_failures", a.item3_failures.len());
    let dens: Vec<String> = a
        .nonedge_densities
        .iter()
        .map(|&(i, j, d)| format!("{}-{}:{}", i + 1, j + 1, d))
        .collect();
    r.put("nonedge_densities", dens.join(" "));
    r.put("audit_passes", a.passes());
    if !a.passes() {
        r.status = Status::Negative;
    }
    if farness {
        let m = match mutated {
            Some(p) => load(p, format::parse_tournament)?,
            None => b.tournament.clone(),
        };
        let c = farness_certificate(&b, &h, &m)?;
        r.line(format!("family of {} cut-edge-disjoint copies, {} surviving", c.family.len(), c.surviving));
        r.put("family", c.family.len());
        r.list("family_per_clique", &c.per_clique);
        r.put("cut_disjoint", c.cut_disjoint);
        r.put("reversed_cut_edges", c.reversed_cut_edges);
        r.put("reversed_cluster_edges", c.reversed_cluster_edges);
        r.put("surviving", c.surviving);
        r.put("present", c.present);
    }
    emit(out, &format::write_tournament(&b.tournament, fmt_out), &mut r)?;
    side_file(out, ".provenance", &format::write_provenance(&b), &mut r)?;
    Ok(r)
}

fn audit_copies(pattern: &Path, n: usize, n_max: usize, seed: u64, budget: &mut Budget) -> Res<Report> {
    let h = load(pattern, format::parse_oriented)?;
    let b = blowup_tournament(&h, n, n_max, seed, budget)?;
    let rep = audit_copy_localization(&b, &h, budget)?;
    let mut r = Report::new("audit-copies");
    r.line(format!("{} copies, {} violations", rep.copies, rep.violations()));
    r.put("vertices", b.order());
    r.put("embeddings", rep.embeddings);
    r.put("automorphisms", rep.automorphisms);
    r.put("copies", rep.copies);
    r.put("missing_tuple", rep.missing_tuple);
    r.put("non_cycle_tuples", rep.non_cycle_tuples);
    r.put("tuple_count", rep.tuple_count);
    r.put("copy_bound", rep.copy_bound);
    r.put("tuple_bound", format!("{}/{}", rep.tuple_bound.0, rep.tuple_bound.1));
    if rep.violations() > 0 {
        r.status = Status::Negative;
    }
    Ok(r)
}

fn gadget_verify() -> Res<Report> {
    let g = verify_gadget()?;
    let mut r = Report::new("gadget-verify");
    r.line(format!(
        "{} colorings checked, {} proper, u and v share a color in all of them",
        g.colorings, g.proper
    ));
    r.put("colorings", g.colorings);
    r.put("proper", g.proper);
    r.put("uv_same_color", true);
    r.put("item1_witnesses", g.item1_witnesses);
    r.put("standard_split_proper", g.standard_split_proper);
    Ok(r)
}

fn reduce_cmd(graph: &Path, out: Option<&Path>, fmt_out: GraphFormat) -> Res<Report> {
    let g = load(graph, format::parse_graph)?;
    let o = reduce(&g);
    audit_reduction(&g, &o)?;
    let mut r = Report::new("reduce");
    r.line(format!("{} triangles, {} tournament vertices", o.triangles.len(), o.tournament.order()));
    r.put("graph_vertices", g.order());
    r.put("triangles", o.triangles.len());
    r.put("vertices", o.tournament.order());
    let count = |f: fn(&Role) -> bool| o.roles.iter().filter(|x| f(x)).count();
    r.put("y", count(|x| matches!(x, Role::Y { .. })));
    r.put("z", count(|x| matches!(x, Role::Z { .. })));
    r.put("k", count(|x| matches!(x, Role::K { .. })));
    r.put("audit", "ok");
    emit(out, &format::write_tournament(&o.tournament, fmt_out), &mut r)?;
    side_file(out, ".roles", &format::write_roles(&o), &mut r)?;
    Ok(r)
}

fn check_reduction_cmd(graph: &Path, budget: &mut Budget) -> Res<Report> {
    let g = load(graph, format::parse_graph)?;
    let v = check_reduction(&g, budget)?;
    let mut r = Report::new("check-reduction");
    let agrees = v.agrees(&g);
    r.line(format!(
        "triangle-free cut {}, tournament 2-colorable {}, agreement {}",
        v.cut.is_some(),
        v.coloring.is_some(),
        agrees
    ));
    r.put("graph_vertices", g.order());
    r.put("triangles", v.triangles);
    r.put("tournament_vertices", v.vertices);
    r.put("has_cut", v.cut.is_some());
    r.put("colorable", v.coloring.is_some());
    if let Some(c) = &v.cut {
        r.put("cut", vertices(&(0..c.len()).filter(|&i| c[i]).collect::<Vec<_>>()));
    }
    if let Some(c) = &v.lifted_cut {
        r.put("lifted_cut", vertices(&(0..c.len()).filter(|&i| c[i]).collect::<Vec<_>>()));
    }
    r.put("agrees", agrees);
    if !agrees {
        r.status = Status::Negative;
    }
    Ok(r)
}

fn lift_cmd(input: &Path, k: usize, out: Option<&Path>, verify: bool, fmt_out: GraphFormat, budget: &mut Budget) -> Res<Report> {
    let t = load(input, format::parse_tournament)?;
    let l = lift(&t, k)?;
    let mut r = Report::new("lift");
    r.line(format!("{} vertices lifted to {}", t.order(), l.order()));
    r.put("input_vertices", t.order());
    r.put("vertices", l.order());
    r.put("k", k);
    if verify {
        let decide = |g: &OrientedGraph, c: usize, budget: &mut Budget| -> Res<bool> {
            match acyclic_k_coloring_with(g, c, budget) {
                Outcome::Found(_) => Ok(true),
                Outcome::Infeasible => Ok(false),
                Outcome::Exhausted { .. } => Err(Failure::Budget(format!("{c}-coloring search exhausted the budget"))),
            }
        };
        let before = decide(t.as_oriented(), k - 1, budget)?;
        let after = decide(l.as_oriented(), k, budget)?;
        r.put("input_colorable", before);
        r.put("lift_colorable", after);
        r.put("equivalent", before == after);
        if before != after {
            r.status = Status::Negative;
        }
    }
    emit(out, &format::write_tournament(&l, fmt_out), &mut r)?;
    Ok(r)
}
