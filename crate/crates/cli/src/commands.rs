//! Command implementations. Every command renders a deterministic byte
//! string (JSON or CSV) and writes it to `--out` or stdout.

use crate::{Cli, Command, DistCommand, SieveCommand, TrendsCommand, WreathCommand};
use cgsieve::character::{smoothness_sum, CharacterTable};
use cgsieve::dist::{
    coset_leaf_dist, natural_dist, partition_dist_json, plancherel_dist, Distribution,
};
use cgsieve::forest::parse_forest_json;
use cgsieve::group::{parse_group_descriptor, ConcreteGroup};
use cgsieve::partition::Partition;
use cgsieve::perm::Perm;
use cgsieve::scalar::{rat_string, Rat};
use cgsieve::sieve::{
    dihedral_missing_harmonic_demo, distinguishing_bound, exact_transcript_prob_involution,
    exact_transcript_prob_trivial, homogeneous_hit_experiment, inhomogeneity_equality_audit,
    simulate_trivial, transcript_prob_f64, SubgroupCase, Strategy, TableModel,
};
use cgsieve::trends::{max_dimension_trend, partition_growth, smoothness_trend, typicality_decay};
use cgsieve::wreath::{homogeneous_outcome_prob, WreathData, WreathIrrep};
use cgsieve::{Error, Result};
use num::ToPrimitive;
use serde_json::{json, Value};

pub fn run(cli: &Cli) -> Result<()> {
    let output = render(cli)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &output)?;
            if cli.manifest {
                let manifest_path = format!("{}.manifest.json", path.display());
                let manifest = serde_json::to_string_pretty(&manifest_json(cli))?;
                std::fs::write(manifest_path, manifest + "\n")?;
            }
        }
        None => {
            if cli.manifest {
                return Err(Error::invalid("--manifest requires --out"));
            }
            print!("{output}");
        }
    }
    Ok(())
}

fn manifest_json(cli: &Cli) -> Value {
    // serde_json's default map sorts keys, so the manifest is byte-stable.
    serde_json::to_value(cli).expect("cli serializes")
}

fn render(cli: &Cli) -> Result<String> {
    let exact = match cli.precision.as_str() {
        "exact" => true,
        "float" => false,
        other => return Err(Error::invalid(format!("unknown precision mode {other:?}"))),
    };
    match &cli.command {
        Command::Chartable(args) => chartable(args.n, &cli.format),
        Command::Dist(cmd) => dist(cmd, &cli.format, exact),
        Command::Wreath(cmd) => wreath(cmd, exact),
        Command::Sieve(cmd) => sieve(cmd, cli.seed, exact),
        Command::Trends(cmd) => trends(cmd, cli.seed, &cli.format),
        Command::Smoothness(args) => smoothness(args),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn prob_value(p: &Rat, exact: bool) -> Value {
    if exact {
        Value::String(rat_string(p))
    } else {
        json!(p.to_f64().unwrap())
    }
}

// ---------------------------------------------------------------------------

fn chartable(n: u32, format: &str) -> Result<String> {
    let table = CharacterTable::new(n)?;
    match format {
        "csv" => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("ascii"))
        }
        "json" => Ok(pretty(&table.to_json())),
        other => Err(Error::invalid(format!("unknown format {other:?}"))),
    }
}

fn dist_to_csv(dist: &Distribution<Partition>) -> String {
    let mut out = String::from("partition,p\n");
    for (p, prob) in dist.entries() {
        out.push_str(&format!("\"{}\",{}\n", p.to_compact_string(), rat_string(prob)));
    }
    out
}

fn dist(cmd: &DistCommand, format: &str, exact: bool) -> Result<String> {
    match cmd {
        DistCommand::Plancherel { n } => {
            let d = plancherel_dist(*n)?;
            match format {
                "csv" => Ok(dist_to_csv(&d)),
                _ => Ok(pretty(&partition_dist_json(*n, "plancherel", &d))),
            }
        }
        DistCommand::Natural { n, lambda, mu } => {
            let table = CharacterTable::new(*n)?;
            let lambda = Partition::parse(lambda)?;
            let mu = Partition::parse(mu)?;
            let d = natural_dist(&table, &lambda, &mu)?;
            match format {
                "csv" => Ok(dist_to_csv(&d)),
                _ => Ok(pretty(&partition_dist_json(*n, "natural", &d))),
            }
        }
        DistCommand::Coset { group, involution } => {
            let g = parse_group_descriptor(group)?;
            let m = parse_involution(&g, involution)?;
            let d = coset_leaf_dist(&g, m)?;
            let entries: Vec<Value> = d
                .entries()
                .iter()
                .map(|(idx, p)| {
                    let name = &g.irreps()[*idx].name;
                    let key = if group.starts_with("sym:") {
                        "partition"
                    } else {
                        "irrep"
                    };
                    json!({ key: name, "p": prob_value(p, exact) })
                })
                .collect();
            Ok(pretty(&json!({
                "group": group,
                "kind": "coset",
                "involution": involution,
                "entries": entries,
            })))
        }
    }
}

fn base_table(base: &str) -> Result<CharacterTable> {
    let n: u32 = base
        .strip_prefix("sym:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::invalid("wreath base must be sym:n"))?;
    CharacterTable::new(n)
}

fn wreath(cmd: &WreathCommand, exact: bool) -> Result<String> {
    match cmd {
        WreathCommand::Irreps { base } => {
            let table = base_table(base)?;
            let data = WreathData::new(&table);
            let irreps: Vec<Value> = data
                .irreps()
                .iter()
                .map(|w| json!({ "irrep": w.to_string(), "dim": w.dim().to_string() }))
                .collect();
            Ok(pretty(&json!({
                "base": base,
                "order": data.order().to_string(),
                "count": irreps.len(),
                "irreps": irreps,
            })))
        }
        WreathCommand::Plancherel { base } => {
            let table = base_table(base)?;
            let data = WreathData::new(&table);
            let planch = data.plancherel()?;
            let entries: Vec<Value> = planch
                .entries()
                .iter()
                .map(|(w, p)| json!({ "irrep": w.to_string(), "p": prob_value(p, exact) }))
                .collect();
            Ok(pretty(&json!({
                "base": base,
                "kind": "plancherel",
                "homogeneous_mass": prob_value(&data.homogeneous_mass(&planch), exact),
                "entries": entries,
            })))
        }
        WreathCommand::Natural {
            base,
            sigma1,
            sigma2,
        } => {
            let table = base_table(base)?;
            let data = WreathData::new(&table);
            let s1 = WreathIrrep::parse(sigma1)?;
            let s2 = WreathIrrep::parse(sigma2)?;
            let nat = data.natural(&s1, &s2)?;
            let entries: Vec<Value> = nat
                .entries()
                .iter()
                .map(|(w, p)| json!({ "irrep": w.to_string(), "p": prob_value(p, exact) }))
                .collect();
            let hom_info = match (&s1, &s2) {
                (WreathIrrep::Inhom(..), WreathIrrep::Inhom(..)) => {
                    let rep = homogeneous_outcome_prob(&data, &s1, &s2)?;
                    json!({
                        "mass": prob_value(&rep.mass, exact),
                        "collision_average": prob_value(&rep.collision_average, exact),
                        "collision_max_bound": prob_value(&rep.collision_max, exact),
                    })
                }
                _ => json!(prob_value(&data.homogeneous_mass(&nat), exact)),
            };
            Ok(pretty(&json!({
                "base": base,
                "kind": "natural",
                "sigma1": s1.to_string(),
                "sigma2": s2.to_string(),
                "homogeneous": hom_info,
                "entries": entries,
            })))
        }
    }
}

fn parse_involution(group: &ConcreteGroup, spec: &str) -> Result<usize> {
    let elem = match spec {
        "canonical" => {
            if group.wreath_base().is_some() {
                group.wreath_flip_involution(0).unwrap()
            } else if let Some(r) = group.dihedral_reflection(0) {
                r
            } else {
                // Symmetric group: the transposition swapping 1 and 2.
                let n = group
                    .symmetric_perm(0)
                    .map(|p| p.n())
                    .ok_or_else(|| Error::invalid("no canonical involution for this group"))?;
                if n < 2 {
                    return Err(Error::invalid("S_1 has no involutions"));
                }
                let mut imgs: Vec<u32> = (0..n as u32).collect();
                imgs.swap(0, 1);
                group.symmetric_index(&Perm::new(imgs).unwrap()).unwrap()
            }
        }
        "id" => group.identity(),
        other => {
            if let Some(axis) = other.strip_prefix("reflection:") {
                let axis: u32 = axis
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad reflection axis {axis:?}")))?;
                group
                    .dihedral_reflection(axis)
                    .ok_or_else(|| Error::invalid("reflection: needs a dihedral group"))?
            } else if let Some(alpha) = other.strip_prefix("flip:") {
                let alpha: usize = alpha
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad flip index {alpha:?}")))?;
                group
                    .wreath_flip_involution(alpha)
                    .ok_or_else(|| Error::invalid("flip: needs a wreath group"))?
            } else if let Some(one_line) = other.strip_prefix("perm:") {
                let p = Perm::from_one_line(one_line)?;
                group
                    .symmetric_index(&p)
                    .ok_or_else(|| Error::invalid("perm: needs a matching symmetric group"))?
            } else if let Some(idx) = other.strip_prefix("elem:") {
                idx.parse::<usize>()
                    .ok()
                    .filter(|&e| e < group.order())
                    .ok_or_else(|| Error::invalid(format!("bad element index {idx:?}")))?
            } else {
                return Err(Error::invalid(format!("bad involution spec {spec:?}")));
            }
        }
    };
    if elem != group.identity() && !group.is_involution(elem) {
        return Err(Error::NotAnInvolution);
    }
    Ok(elem)
}

fn label_index(group: &ConcreteGroup, label: &str) -> Result<usize> {
    if let Some(idx) = group.irrep_index_by_name(label) {
        return Ok(idx);
    }
    // Wreath labels may list the pair in either order; canonicalize.
    if label.starts_with("inhom:") || label.starts_with("hom:") {
        let w = WreathIrrep::parse(label)?;
        if let Some(idx) = group.irrep_index_by_name(&w.to_string()) {
            return Ok(idx);
        }
    }
    Err(Error::invalid(format!("unknown irrep label {label:?}")))
}

fn sieve(cmd: &SieveCommand, seed: u64, exact: bool) -> Result<String> {
    match cmd {
        SieveCommand::Run {
            group,
            leaves,
            strategy,
            runs,
        } => sieve_run(group, *leaves, strategy, *runs, seed),
        SieveCommand::Exact {
            group,
            forest,
            involution,
        } => sieve_exact(group, forest, involution, exact),
        SieveCommand::Audit { base, max_k } => sieve_audit(base, *max_k, exact),
        SieveCommand::DihedralDemo { n, runs } => {
            let demo = dihedral_missing_harmonic_demo(*n, *runs, seed)?;
            Ok(pretty(&json!({
                "n": demo.n,
                "missing_harmonic": demo.missing_harmonic,
                "audited_topologies": demo.audited_topologies,
                "audited_labelings": demo.audited_labelings,
                "max_mass_on_harmonic": demo.max_mass_on_harmonic,
                "exact_audit_passed": demo.exact_audit_passed,
                "leaf_prob_exact": rat_string(&demo.leaf_prob_exact),
                "mc_runs": demo.mc_runs,
                "mc_leaf_draws": demo.mc_leaf_draws,
                "mc_harmonic_leaves": demo.mc_harmonic_leaves,
                "mc_leaf_frequency": demo.mc_leaf_frequency,
                "mc_within_3_sigma": demo.mc_within_3_sigma,
                "mc_observed_runs": demo.mc_observed_runs,
            })))
        }
        SieveCommand::Hit {
            n,
            leaves,
            strategy,
            runs,
        } => {
            let strategy = Strategy::parse(strategy)?;
            let rep = homogeneous_hit_experiment(*n, *leaves, strategy, *runs, seed)?;
            Ok(pretty(&json!({
                "n": rep.n,
                "leaves": rep.leaves,
                "runs": rep.runs,
                "per_leaf_hom_prob": rat_string(&rep.per_leaf_hom_prob),
                "leaf_hit_runs": rep.leaf_hit_runs,
                "internal_hit_runs": rep.internal_hit_runs,
                "any_hit_runs": rep.any_hit_runs,
                "frequency": rep.frequency,
                "wilson_lo": rep.wilson.lo,
                "wilson_hi": rep.wilson.hi,
                "per_level": rep.per_level,
            })))
        }
    }
}

fn sieve_run(group: &str, leaves: usize, strategy: &str, runs: u64, seed: u64) -> Result<String> {
    if leaves == 0 {
        return Err(Error::invalid("need at least one leaf"));
    }
    let g = parse_group_descriptor(group)?;
    let strategy = Strategy::parse(strategy)?;
    let model = TableModel::new(&g)?;
    let r = g.irreps().len();
    let mut leaf_counts = vec![0u64; r];
    let mut internal_counts = vec![0u64; r];
    let mut root_counts = vec![0u64; r];
    for i in 0..runs {
        let mut rng = cgsieve::rng::derive_run_rng(seed, "sieve-run", i);
        let (forest, labels) = simulate_trivial(&model, leaves, strategy, &mut rng);
        let root = forest.roots()[0];
        root_counts[labels[root]] += 1;
        for (id, &l) in labels.iter().enumerate() {
            if forest.is_leaf(id) {
                leaf_counts[l] += 1;
            } else {
                internal_counts[l] += 1;
            }
        }
    }
    let names: Vec<&str> = g.irreps().iter().map(|i| i.name.as_str()).collect();
    let rows: Vec<Value> = (0..r)
        .map(|i| {
            json!({
                "irrep": names[i],
                "leaf_count": leaf_counts[i],
                "internal_count": internal_counts[i],
                "root_count": root_counts[i],
            })
        })
        .collect();
    Ok(pretty(&json!({
        "group": group,
        "leaves": leaves,
        "strategy": format!("{strategy:?}"),
        "runs": runs,
        "seed": seed,
        "counts": rows,
    })))
}

fn sieve_exact(group: &str, forest_path: &std::path::Path, involution: &str, exact: bool) -> Result<String> {
    let g = parse_group_descriptor(group)?;
    let text = std::fs::read_to_string(forest_path)?;
    let (forest, label_strings) = parse_forest_json(&text)?;
    let labels: Vec<usize> = label_strings
        .iter()
        .enumerate()
        .map(|(node, l)| match l {
            Some(s) => label_index(&g, s).map_err(|e| Error::BadInput {
                node,
                msg: e.to_string(),
            }),
            None => Err(Error::BadInput {
                node,
                msg: "pointwise evaluation needs a label on every node".into(),
            }),
        })
        .collect::<Result<_>>()?;
    let m = parse_involution(&g, involution)?;
    let (p1, ph) = if g.exact_characters() {
        let p1 = exact_transcript_prob_trivial(&g, &forest, &labels)?;
        let ph = exact_transcript_prob_involution(&g, &forest, &labels, m)?;
        (prob_value(&p1, exact), prob_value(&ph, exact))
    } else {
        let p1 = transcript_prob_f64(&g, &forest, &labels, SubgroupCase::Trivial)?;
        let ph = transcript_prob_f64(&g, &forest, &labels, SubgroupCase::Involution(m))?;
        (json!(p1), json!(ph))
    };
    Ok(pretty(&json!({
        "group": group,
        "leaves": forest.leaves(),
        "nodes": forest.k(),
        "involution": involution,
        "p_trivial": p1,
        "p_involution": ph,
    })))
}

fn sieve_audit(base: &str, max_k: usize, exact: bool) -> Result<String> {
    let base_group = parse_group_descriptor(base)?;
    let g = cgsieve::group::make_wreath_z2(base_group)?;
    let m = g.wreath_flip_involution(0).unwrap();
    let audit = inhomogeneity_equality_audit(&g, m, max_k)?;
    let bounds = distinguishing_bound(&g, m, max_k)?;
    let topo_rows: Vec<Value> = bounds
        .iter()
        .map(|b| {
            json!({
                "leaves": b.leaves,
                "k": b.k,
                "tvd": prob_value(&b.tvd, exact),
                "hom_mass_trivial": prob_value(&b.hom_mass_trivial, exact),
                "tvd_inhomogeneous": prob_value(&b.tvd_inhomogeneous, exact),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "group": audit.group,
        "max_k": audit.max_k,
        "topologies": audit.topologies,
        "labelings": audit.labelings,
        "all_inhom_labelings": audit.all_inhom_labelings,
        "violations": audit.violations,
        "differing_labelings": audit.differing_labelings,
        "differing_with_hom": audit.differing_with_hom,
        "summary": format!("violations: {}", audit.violations),
        "distinguishing": topo_rows,
    })))
}

fn trends(cmd: &TrendsCommand, seed: u64, format: &str) -> Result<String> {
    let report = match cmd {
        TrendsCommand::Maxdim { n_min, n_max } => max_dimension_trend(*n_min..=*n_max)?,
        TrendsCommand::Typicality {
            grid,
            samples,
            d_param,
        } => {
            let ns: Vec<u32> = grid
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad grid entry {t:?}")))
                })
                .collect::<Result<_>>()?;
            typicality_decay(&ns, *samples, *d_param, seed)?
        }
        TrendsCommand::Partitions { n_min, n_max } => partition_growth(*n_min..=*n_max)?,
        TrendsCommand::Smoothness {
            n_min,
            n_max,
            d_param,
        } => smoothness_trend(*n_min..=*n_max, *d_param)?,
    };
    match format {
        "json" => {
            let points: Vec<Value> = report
                .points
                .iter()
                .map(|p| {
                    json!({
                        "n": p.n,
                        "value": p.value.as_ref().map(rat_string),
                        "value_float": p.value_f64,
                        "normalized": p.normalized,
                        "wilson": p.wilson.map(|w| vec![w.lo, w.hi]),
                    })
                })
                .collect();
            let flags: Vec<Value> = report
                .flags
                .iter()
                .map(|(k, v)| json!({ "flag": k, "holds": v }))
                .collect();
            Ok(pretty(&json!({
                "kind": report.kind,
                "points": points,
                "flags": flags,
            })))
        }
        _ => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("ascii"))
        }
    }
}

fn smoothness(args: &crate::SmoothnessArgs) -> Result<String> {
    let table = CharacterTable::new(args.n)?;
    let lambdas: Vec<Partition> = match &args.lambda {
        Some(s) => vec![Partition::parse(s)?],
        None => table.irreps().to_vec(),
    };
    let rows: Vec<Value> = lambdas
        .iter()
        .map(|lam| {
            let rep = smoothness_sum(&table, lam)?;
            Ok(json!({
                "lambda": lam.to_compact_string(),
                "sum": rat_string(&rep.sum),
                "by_transposition_distance": rep
                    .by_transposition_distance
                    .iter()
                    .map(rat_string)
                    .collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(pretty(&json!({ "n": args.n, "irreps": rows })))
}
