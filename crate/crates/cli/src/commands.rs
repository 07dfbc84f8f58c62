use std::path::Path;

use charclass::genus::{genus_on_projective, Builtin, CharSeries};
use charclass::jets::{cylinder_measure, oracle_integral, JetSpec};
use charclass::k0::{blowup_relation_check, pro_euler, pro_grothendieck, pushforward_cf, AtomTable, ConstructibleFunction};
use charclass::projmodel::{hrr_check, ty_class_degree, ProjSpaceRing};
use charclass::ring::{fmt_rational, int};
use charclass::stringy::{
    invariance_check, motivic_integral, stringy_chi_y, stringy_e, stringy_euler, stringy_euler_direct,
    stringy_euler_limit, Realization, ResolutionDatum, RootFraction,
};
use charclass::{Error, Rational};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::{read_json, AtomFile, BlowupFile, DatumFile, PushforwardFile, TowerFile, TowerInput};
use crate::report::{emit_table, Report};
use crate::{Cli, Command, DivisorArgs, GenusArgs, JetsCommand, K0Command, StringyCommand};

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let order = cli.order as usize;
    match &cli.command {
        Command::Genus(args) => genus(args, order),
        Command::Hrr { n, d } => hrr(*n, *d),
        Command::Ty { n } => ty(*n),
        Command::K0(cmd) => k0(cmd),
        Command::Pro { file } => pro(file),
        Command::Stringy(cmd) => stringy(cmd, cli.relative),
        Command::Jets(cmd) => jets(cmd),
    }
}

fn genus(args: &GenusArgs, order: usize) -> Result<Report, CliError> {
    let f = CharSeries::by_name(&args.series, order)?;
    if !args.sweep {
        let value = genus_on_projective(&f, args.n as usize)?.to_string();
        let json = json!({ "series": f.name(), "n": args.n, "order": order, "value": value });
        return Ok(Report::new(value, json));
    }
    let mut rows = Vec::new();
    for n in 0..=args.n {
        rows.push(vec![n.to_string(), genus_on_projective(&f, n as usize)?.to_string()]);
    }
    let json_rows: Vec<Value> = rows.iter().map(|r| json!({ "n": r[0].parse::<u32>().unwrap(), "value": r[1] })).collect();
    let text = emit_table(&["n", "genus"], &rows);
    Ok(Report::new(text, json!({ "series": f.name(), "order": order, "rows": json_rows })))
}

/// `χ(P^n, O(d)) = (d+1)(d+2)⋯(d+n)/n!`, valid for every integer `d`.
fn euler_characteristic_of_twist(n: u32, d: i64) -> Rational {
    (1..=n as i64).fold(int(1), |acc, i| acc * int(d + i) / int(i))
}

fn hrr(n: u32, d: i64) -> Result<Report, CliError> {
    let (chi, integral) = if d >= 0 {
        let r = hrr_check(n, d as u32)?;
        (r.lhs, r.rhs)
    } else {
        let integral = ProjSpaceRing::projective(n)
            .hrr_integral(d)?
            .as_constant()
            .ok_or_else(|| Error::Consistency("Todd integral is not a number".into()))?;
        (euler_characteristic_of_twist(n, d), integral)
    };
    let equal = chi == integral;
    let text = format!(
        "chi(P^{n}, O({d})) = {}\nintegral of ch(O({d})) td(P^{n}) = {}\nequal: {equal}",
        fmt_rational(&chi),
        fmt_rational(&integral)
    );
    let json = json!({ "n": n, "d": d, "chi": fmt_rational(&chi), "integral": fmt_rational(&integral), "equal": equal });
    Ok(Report::new(text, json).failed_unless(equal))
}

fn ty(n: u32) -> Result<Report, CliError> {
    let via_ring = ty_class_degree(n)?;
    let via_series = genus_on_projective(&CharSeries::builtin(Builtin::Hirzebruch, n as usize), n as usize)?;
    let equal = via_ring == via_series;
    let text = if equal { via_ring.to_string() } else { format!("{via_ring}\nseries route gives {via_series}") };
    let json = json!({ "n": n, "value": via_ring.to_string(), "series_value": via_series.to_string(), "equal": equal });
    Ok(Report::new(text, json).failed_unless(equal))
}

fn load_atoms(path: Option<&Path>) -> Result<AtomTable, CliError> {
    match path {
        Some(p) => crate::input::atom_table(&read_json::<AtomFile>(p)?.atoms),
        None => Ok(AtomTable::new()),
    }
}

fn k0(cmd: &K0Command) -> Result<Report, CliError> {
    match cmd {
        K0Command::Eval { expr, atoms } => {
            let table = load_atoms(atoms.atoms.as_deref())?;
            let class = table.parse_class(expr)?;
            let e = table.e_polynomial(&class)?;
            let chi_y = table.chi_y(&class)?;
            let euler = table.euler(&class)?;
            let dim = table.dimension(&class)?.map_or_else(|| "empty".to_string(), |d| d.to_string());
            let text = format!("class: {class}\nE: {e}\nchi_y: {chi_y}\neuler: {euler}\ndimension: {dim}");
            let json = json!({
                "class": class.to_string(),
                "E": e.to_string(),
                "chi_y": chi_y.to_string(),
                "euler": euler.to_string(),
                "dimension": dim,
            });
            Ok(Report::new(text, json))
        }
        K0Command::Chiy { expr, atoms } => {
            let table = load_atoms(atoms.atoms.as_deref())?;
            let value = table.chi_y(&table.parse_class(expr)?)?.to_string();
            Ok(Report::new(value.clone(), json!({ "chi_y": value })))
        }
        K0Command::Euler { expr, atoms } => {
            let table = load_atoms(atoms.atoms.as_deref())?;
            let value = table.euler(&table.parse_class(expr)?)?.to_string();
            Ok(Report::new(value.clone(), json!({ "euler": value })))
        }
        K0Command::BlowupCheck { file } => {
            let spec: BlowupFile = read_json(file)?;
            let table = crate::input::atom_table(&spec.atoms)?;
            let [x, center, blowup, exceptional] =
                [&spec.x, &spec.center, &spec.blowup, &spec.exceptional].map(|s| table.parse_class(s));
            let (x, center, blowup, exceptional) = (x?, center?, blowup?, exceptional?);
            let holds = blowup_relation_check(&x, &center, &blowup, &exceptional);
            let left = &blowup - &exceptional;
            let right = &x - &center;
            let text = format!("[Bl] - [E] = {left}\n[X] - [Z] = {right}\nrelation holds: {holds}");
            let json = json!({ "blowup_minus_exceptional": left.to_string(), "x_minus_center": right.to_string(), "holds": holds });
            Ok(Report::new(text, json).failed_unless(holds))
        }
        K0Command::Pushforward { file } => pushforward(file),
    }
}

fn function_table(f: &ConstructibleFunction) -> Vec<Vec<String>> {
    f.named_values().into_iter().map(|(s, v)| vec![s.to_string(), v.to_string()]).collect()
}

fn pushforward(file: &Path) -> Result<Report, CliError> {
    let input = read_json::<PushforwardFile>(file)?.build()?;
    let composite = input.maps[1..].iter().try_fold(input.maps[0].clone(), |acc, m| acc.then(m))?;
    let mut sections = Vec::new();
    let mut json = json!({});

    if let Some(alpha) = &input.function {
        let mut staged = alpha.clone();
        for m in &input.maps {
            staged = pushforward_cf(&input.atoms, m, &staged)?;
        }
        let direct = pushforward_cf(&input.atoms, &composite, alpha)?;
        if direct != staged {
            return Err(Error::Consistency("pushing forward along the composite differs from pushing in stages".into()).into());
        }
        let source_integral = alpha.euler_integral(&input.atoms)?;
        let target_integral = direct.euler_integral(&input.atoms)?;
        if source_integral != target_integral {
            return Err(Error::Consistency(format!(
                "Euler integral changed from {source_integral} to {target_integral} under pushforward"
            ))
            .into());
        }
        let rows = function_table(&direct);
        sections.push(format!("pushforward of the function\n{}", emit_table(&["stratum", "value"], &rows)));
        sections.push(format!("euler integral: {target_integral}"));
        json["function"] = json!(direct.named_values().into_iter().map(|(s, v)| (s.to_string(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>());
        json["euler_integral"] = json!(target_integral.to_string());
    }

    if let Some(rel) = &input.relative {
        let mut staged = rel.clone();
        for m in &input.maps {
            staged = staged.pushforward(m)?;
        }
        let direct = rel.pushforward(&composite)?;
        if direct != staged {
            return Err(Error::Consistency("relative pushforward is not functorial on this chain".into()).into());
        }
        let eps_after = direct.epsilon(&input.atoms)?;
        let eps_before = pushforward_cf(&input.atoms, &composite, &rel.epsilon(&input.atoms)?)?;
        if eps_after != eps_before {
            return Err(Error::Consistency("epsilon does not commute with pushforward".into()).into());
        }
        let names: Vec<&str> = direct.base().strata().iter().map(|s| s.name.as_str()).collect();
        let rows: Vec<Vec<String>> = names
            .iter()
            .zip(direct.fibers())
            .zip(eps_after.values())
            .map(|((n, f), e)| vec![n.to_string(), f.to_string(), e.to_string()])
            .collect();
        sections.push(format!("pushforward of the relative class\n{}", emit_table(&["stratum", "fiber", "euler"], &rows)));
        json["relative"] = json!(rows
            .iter()
            .map(|r| (r[0].clone(), json!({ "fiber": r[1], "euler": r[2] })))
            .collect::<serde_json::Map<_, _>>());
    }
    Ok(Report::new(sections.join("\n\n"), json))
}

fn pro(file: &Path) -> Result<Report, CliError> {
    let spec: TowerFile = read_json(file)?;
    let level = spec.level;
    match spec.build()? {
        TowerInput::Euler(tower, chi) => {
            let v = fmt_rational(&pro_euler(&tower, level, &chi)?);
            Ok(Report::new(v.clone(), json!({ "level": level, "euler": v })))
        }
        TowerInput::Classes(tower, class) => {
            let v = pro_grothendieck(&tower, level, &class)?;
            let den: Vec<String> = v.denominator.iter().map(ToString::to_string).collect();
            let json = json!({
                "level": level,
                "value": v.to_string(),
                "numerator": v.numerator.to_string(),
                "denominator": den,
            });
            Ok(Report::new(v.to_string(), json))
        }
    }
}

fn load_datum(path: &Path) -> Result<ResolutionDatum, CliError> {
    read_json::<DatumFile>(path)?.build()
}

fn fraction_json(v: &RootFraction) -> Value {
    json!({
        "value": v.to_string(),
        "numerator": v.numerator_display().to_string(),
        "denominator": v.denominator_display().to_string(),
        "root_index": v.root_index(),
    })
}

fn subset_label(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn integral_report(d: &ResolutionDatum, how: Realization, relative: bool) -> Result<Report, CliError> {
    let total = match how {
        Realization::K0 => motivic_integral(d)?,
        Realization::Hodge => stringy_e(d)?,
    };
    if !relative {
        return Ok(Report::new(total.to_string(), fraction_json(&total)));
    }
    let parts = d.stratum_contributions(how)?;
    let mut rows: Vec<Vec<String>> = parts.iter().map(|(s, v)| vec![subset_label(s), v.to_string()]).collect();
    rows.push(vec!["total".into(), total.to_string()]);
    let mut json = fraction_json(&total);
    json["strata"] = json!(parts
        .iter()
        .map(|(s, v)| json!({ "subset": s, "contribution": v.to_string() }))
        .collect::<Vec<_>>());
    Ok(Report::new(emit_table(&["stratum", "contribution"], &rows), json))
}

fn stringy(cmd: &StringyCommand, relative: bool) -> Result<Report, CliError> {
    match cmd {
        StringyCommand::Integral { file } => integral_report(&load_datum(file)?, Realization::K0, relative),
        StringyCommand::Efun { file } => integral_report(&load_datum(file)?, Realization::Hodge, relative),
        StringyCommand::Chiy { file } => {
            let v = stringy_chi_y(&load_datum(file)?)?;
            Ok(Report::new(v.to_string(), json!({ "value": v.to_string(), "variable": v.variable(), "root_index": v.index_r })))
        }
        StringyCommand::Euler { file } => {
            let d = load_datum(file)?;
            let v = fmt_rational(&stringy_euler(&d)?);
            let direct = fmt_rational(&stringy_euler_direct(&d)?);
            let limit = fmt_rational(&stringy_euler_limit(&d)?);
            Ok(Report::new(v.clone(), json!({ "value": v, "direct": direct, "limit": limit })))
        }
        StringyCommand::Compare { first, second } => {
            let r = invariance_check(&load_datum(first)?, &load_datum(second)?)?;
            let rows = vec![
                vec![
                    "motivic integral".into(),
                    r.first.motivic_integral.to_string(),
                    r.second.motivic_integral.to_string(),
                    r.motivic_integral_equal.to_string(),
                ],
                vec![
                    "stringy E".into(),
                    r.first.e_function.to_string(),
                    r.second.e_function.to_string(),
                    r.e_function_equal.to_string(),
                ],
                vec!["stringy chi_y".into(), r.first.chi_y.to_string(), r.second.chi_y.to_string(), r.chi_y_equal.to_string()],
                vec![
                    "stringy Euler".into(),
                    fmt_rational(&r.first.euler),
                    fmt_rational(&r.second.euler),
                    r.euler_equal.to_string(),
                ],
            ];
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|row| json!({ "invariant": row[0], "first": row[1], "second": row[2], "equal": row[3] == "true" }))
                .collect();
            let text = format!(
                "{}\nall equal: {}",
                emit_table(&["invariant", "first", "second", "equal"], &rows),
                r.all_equal()
            );
            Ok(Report::new(text, json!({ "invariants": json_rows, "all_equal": r.all_equal() })).failed_unless(r.all_equal()))
        }
    }
}

fn jet_spec(args: &DivisorArgs, default_level: u32) -> Result<JetSpec, CliError> {
    if let Some(d) = args.dim {
        if d != args.exponents.len() {
            return Err(CliError::Schema(format!("--dim {d} but {} exponents given", args.exponents.len())));
        }
    }
    Ok(JetSpec::new(args.exponents.clone(), args.level.unwrap_or(default_level))?)
}

fn jets(cmd: &JetsCommand) -> Result<Report, CliError> {
    match cmd {
        JetsCommand::Measure { divisor, p } => {
            let spec = jet_spec(divisor, *p)?;
            let v = cylinder_measure(&spec, *p)?.to_string();
            let json = json!({ "exponents": spec.exponents(), "level": spec.level(), "p": p, "measure": v });
            Ok(Report::new(v, json))
        }
        JetsCommand::Oracle { divisor, pmax } => {
            let spec = jet_spec(divisor, *pmax)?;
            let r = oracle_integral(&spec, *pmax)?;
            let rows = vec![
                vec!["partial sum".to_string(), r.partial.to_string()],
                vec!["closed form".to_string(), r.closed.to_string()],
                vec!["matches stringy integral".to_string(), r.matches_stringy.to_string()],
                vec!["stabilized".to_string(), r.stabilized.to_string()],
                vec!["tails within bound".to_string(), r.tails_small.to_string()],
                vec!["verdict".to_string(), r.verdict.to_string()],
            ];
            let json = json!({
                "exponents": spec.exponents(),
                "level": spec.level(),
                "pmax": pmax,
                "partial": r.partial.to_string(),
                "closed": fraction_json(&r.closed),
                "matches_stringy": r.matches_stringy,
                "stabilized": r.stabilized,
                "tails_small": r.tails_small,
                "verdict": r.verdict,
            });
            Ok(Report::new(emit_table(&["check", "value"], &rows), json).failed_unless(r.verdict))
        }
    }
}
