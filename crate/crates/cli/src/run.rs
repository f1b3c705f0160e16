use std::collections::BTreeSet;
use std::time::Instant;

use clap::ValueEnum;
use multstrat::blowup::{self, Center};
use multstrat::cover::{self, CIScheme, CoverPresentation};
use multstrat::equimult;
use multstrat::field::{Field, FieldElem};
use multstrat::groebner;
use multstrat::local::{self, LinearChange, PointedScheme, SubspaceData};
use multstrat::oracle;
use multstrat::random;
use multstrat::strata;
use multstrat::{Error, Ideal, Poly};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Options;
use crate::problem::{parse_problem, CenterSpec, CoverSpec, Problem};
use crate::report::{ErrorInfo, Report, Verdict, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Dade,
    Th14,
    Th16,
    Th57,
    Th211,
    T1,
    T2,
    LocusEquality,
    DimensionDrop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Mult,
    Hs,
    TangentCone,
    Tau,
    Stratify,
    ConeStratum,
    Cover,
    Ci,
    Blowup,
    Sequence,
    Verify(VerifyTarget),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Mult => "mult".into(),
            Command::Hs => "hs".into(),
            Command::TangentCone => "tangent-cone".into(),
            Command::Tau => "tau".into(),
            Command::Stratify => "stratify".into(),
            Command::ConeStratum => "cone-stratum".into(),
            Command::Cover => "cover".into(),
            Command::Ci => "ci".into(),
            Command::Blowup => "blowup".into(),
            Command::Sequence => "sequence".into(),
            Command::Verify(t) => format!("verify {}", t.to_possible_value().unwrap().get_name()),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

type Out = Result<(Map<String, Value>, Vec<Verdict>), Failure>;

struct Ctx<'a> {
    p: &'a Problem,
    o: &'a Options,
    q: u32,
}

fn pts(v: &[Vec<u32>]) -> Value {
    json!(v)
}

fn elems(v: &[FieldElem]) -> Vec<String> {
    v.iter().map(|a| a.to_string()).collect()
}

fn coords(p: &[u32]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl<'a> Ctx<'a> {
    fn field(&self) -> Field {
        self.p.field
    }

    fn n(&self) -> usize {
        self.p.vars.len()
    }

    fn names(&self) -> &[String] {
        &self.p.vars
    }

    fn ideal(&self) -> Ideal {
        Ideal::new(self.field(), self.n(), self.p.ideal.clone())
    }

    fn pointed(&self) -> Result<PointedScheme, Error> {
        PointedScheme::new(self.ideal(), self.p.point_or_origin())
    }

    fn centered(&self) -> Result<Ideal, Error> {
        Ok(self.pointed()?.centered())
    }

    fn fmt_ideal(&self, i: &Ideal) -> Result<String, Error> {
        i.canonical_string(self.names())
    }

    fn fmt_space(&self, s: &SubspaceData) -> String {
        s.fmt_with(self.names())
    }

    /// The centred scheme and coordinate center; forms are straightened first.
    fn center_from(&self, spec: &CenterSpec) -> Result<(PointedScheme, Center, Option<LinearChange>), Error> {
        let x = self.pointed()?;
        match spec {
            CenterSpec::Vars(v) => Ok((PointedScheme::at_origin(x.centered()), Center::new(self.n(), v)?, None)),
            CenterSpec::Forms(f) => {
                let (y, c, ch) = blowup::rectify_center(&x, f)?;
                Ok((y, c, Some(ch)))
            }
        }
    }

    fn center(&self) -> Result<(PointedScheme, Center, Option<LinearChange>), Error> {
        let spec = self.p.center.clone().unwrap_or(CenterSpec::Vars((0..self.n()).collect()));
        self.center_from(&spec)
    }

    fn cover(&self) -> Result<(CoverPresentation, CIScheme), Error> {
        let j = self.centered()?;
        let cov = match &self.p.cover {
            Some(CoverSpec::Base(b)) => cover::build_cover(&j, Some(b))?,
            _ => cover::build_cover(&j, None)?,
        };
        let ci = cover::ci_approximation(&cov)?;
        Ok((cov, ci))
    }

    fn cover_names(&self, cov: &CoverPresentation) -> Vec<String> {
        if cov.change.is_identity() {
            self.p.vars.clone()
        } else {
            self.p.vars.iter().map(|v| format!("{v}'")).collect()
        }
    }

    fn change_json(&self, ch: &LinearChange, primed: &[String]) -> Value {
        let rows: Vec<String> =
            ch.images().iter().zip(self.names()).map(|(img, v)| format!("{v} = {}", img.fmt_with(primed))).collect();
        json!(rows)
    }

    fn oracle_gens(&self, i: &Ideal) -> Result<Vec<Poly>, Error> {
        let f = Field::prime(self.q)?;
        let gens: Vec<Poly> = i.gens().iter().map(|g| g.map_field(f)).collect::<Result<_, _>>()?;
        Ok(if gens.is_empty() { vec![Poly::zero(f, i.nvars())] } else { gens })
    }
}

fn oracle_origin(ctx: &Ctx, i: &Ideal) -> Result<Option<u64>, Error> {
    let gens = match ctx.oracle_gens(i) {
        Ok(g) => g,
        Err(_) => return Ok(None),
    };
    let f = Field::prime(ctx.q)?;
    Ok(Some(oracle::mult_oracle(&gens, &vec![f.zero(); i.nvars()], ctx.o.nmax)?))
}

fn cmd_mult(ctx: &Ctx) -> Out {
    let x = ctx.pointed()?;
    let hs = local::hilbert_samuel_data(&x, 0)?;
    let mut r = Map::new();
    r.insert("point".into(), json!(elems(&x.point)));
    r.insert("multiplicity".into(), json!(hs.multiplicity));
    r.insert("dimension".into(), json!(hs.dimension));
    r.insert("tangent_cone".into(), json!(ctx.fmt_ideal(&hs.tangent_cone_ideal)?));
    let mut v = Vec::new();
    if let Some(e) = oracle_origin(ctx, &x.centered())? {
        r.insert("oracle_multiplicity".into(), json!(e));
        v.push(Verdict::new("oracle-agreement", e == hs.multiplicity, format!("symbolic {} vs oracle {e} over GF({})", hs.multiplicity, ctx.q)));
    }
    Ok((r, v))
}

fn cmd_hs(ctx: &Ctx) -> Out {
    let x = ctx.pointed()?;
    let l = local::hilbert_samuel_function(&x, ctx.o.nmax)?;
    let mut r = Map::new();
    r.insert("lengths".into(), json!(l));
    let mut v = Vec::new();
    if let Ok(gens) = ctx.oracle_gens(&x.centered()) {
        let f = Field::prime(ctx.q)?;
        let o = oracle::hs_prefix(&gens, &vec![f.zero(); ctx.n()], ctx.o.nmax)?;
        r.insert("oracle_lengths".into(), json!(o));
        v.push(Verdict::new("oracle-agreement", o == l, format!("symbolic and oracle lengths over GF({})", ctx.q)));
    }
    Ok((r, v))
}

fn cmd_tangent_cone(ctx: &Ctx) -> Out {
    let x = ctx.pointed()?;
    let hs = local::hilbert_samuel_data(&x, ctx.o.nmax)?;
    let mut r = Map::new();
    r.insert("tangent_cone".into(), json!(ctx.fmt_ideal(&hs.tangent_cone_ideal)?));
    r.insert("hilbert_numerator".into(), json!(hs.hs_numerator));
    r.insert("dimension".into(), json!(hs.dimension));
    Ok((r, vec![]))
}

fn cmd_tau(ctx: &Ctx) -> Out {
    let x = ctx.pointed()?;
    let cone = local::tangent_cone_ideal(&x)?;
    let cs = strata::cone_stratum(&cone, None)?;
    let mut r = Map::new();
    r.insert("tau".into(), json!(cs.tau));
    r.insert("stratum".into(), json!(ctx.fmt_space(&cs.stratum)));
    r.insert("zariski_tangent_dim".into(), json!(local::zariski_tangent_space(&x).dim()));
    Ok((r, vec![]))
}

fn cmd_stratify(ctx: &Ctx) -> Out {
    let t = oracle::stratify_points(&ctx.oracle_gens(&ctx.ideal())?, ctx.n(), ctx.q, ctx.o.nmax)?;
    let mut r = Map::new();
    let rows: Vec<Value> = t.points.iter().zip(&t.mults).map(|(p, m)| json!({"point": p, "multiplicity": m})).collect();
    r.insert("q".into(), json!(ctx.q));
    r.insert("points".into(), json!(rows));
    r.insert("max_multiplicity".into(), json!(t.max_mult()));
    let mut counts = Map::new();
    for e in t.mults.iter().flatten().copied().collect::<BTreeSet<u32>>() {
        counts.insert(e.to_string(), json!(t.with_mult(e).len()));
    }
    r.insert("counts".into(), Value::Object(counts));
    Ok((r, vec![]))
}

/// `GF(q)` points of a linear subspace given over the problem field.
fn subspace_points(ctx: &Ctx, s: &SubspaceData) -> Result<BTreeSet<Vec<u32>>, Error> {
    let forms = Ideal::new(s.field, s.nvars, s.cutting_forms());
    Ok(oracle::enumerate_points(&ctx.oracle_gens(&forms)?, s.nvars, ctx.q)?.points.into_iter().collect())
}

fn cmd_cone_stratum(ctx: &Ctx) -> Out {
    let j = ctx.ideal();
    let cs = strata::cone_stratum(&j, None)?;
    let mut r = Map::new();
    r.insert("stratum".into(), json!(ctx.fmt_space(&cs.stratum)));
    r.insert("tau".into(), json!(cs.tau));
    r.insert("max_multiplicity".into(), json!(cs.max_mult));
    r.insert("presentation_degrees".into(), json!(cs.degrees));
    let table = oracle::stratify_points(&ctx.oracle_gens(&j)?, ctx.n(), ctx.q, ctx.o.nmax)?;
    let top: BTreeSet<Vec<u32>> = table.max_mult().map(|e| table.with_mult(e).into_iter().collect()).unwrap_or_default();
    let lin = subspace_points(ctx, &cs.stratum)?;
    let witness = top.symmetric_difference(&lin).next().map(|p| format!("ideal:{}", coords(p)));
    let mut v = vec![Verdict::new(
        "stratum-vs-oracle",
        top == lin && table.max_mult().map(u64::from) == Some(cs.max_mult),
        format!("{} oracle top points, {} stratum points over GF({})", top.len(), lin.len(), ctx.q),
    )
    .with_witness(witness)];
    let t = strata::translation_invariance_subspace(&j, true)?;
    v.push(Verdict::new("translation-invariance", t == cs.stratum, format!("translations: {}", ctx.fmt_space(&t))));
    v.push(Verdict::new("factorization", strata::factorization_check(&j, &cs.stratum)?, "reduced cone splits off the stratum"));
    Ok((r, v))
}

fn cover_json(ctx: &Ctx, cov: &CoverPresentation) -> Map<String, Value> {
    let nm = ctx.cover_names(cov);
    let mut r = Map::new();
    r.insert("base".into(), json!(cov.base_vars.iter().map(|&b| nm[b].clone()).collect::<Vec<_>>()));
    r.insert("fiber".into(), json!(cov.fiber_vars.iter().map(|&b| nm[b].clone()).collect::<Vec<_>>()));
    if !cov.change.is_identity() {
        r.insert("change".into(), ctx.change_json(&cov.change, &nm));
    }
    r.insert("min_polys".into(), json!(cov.min_polys.iter().map(|f| f.fmt_with(&nm)).collect::<Vec<_>>()));
    r.insert("degrees".into(), json!(cov.degrees));
    r.insert("d_product".into(), json!(cov.d_product));
    r.insert("generic_rank".into(), json!(cov.generic_rank));
    r.insert("warnings".into(), json!(cov.warnings));
    r
}

fn cmd_cover(ctx: &Ctx) -> Out {
    let (cov, _) = ctx.cover()?;
    let v = vec![Verdict::new("rank-bound", cov.generic_rank <= cov.d_product, format!("rank {} <= D {}", cov.generic_rank, cov.d_product))];
    Ok((cover_json(ctx, &cov), v))
}

fn cmd_ci(ctx: &Ctx) -> Out {
    let (cov, ci) = ctx.cover()?;
    let nm = ctx.cover_names(&cov);
    let mut r = cover_json(ctx, &cov);
    r.insert("ci".into(), json!(ci.ideal.fmt_with(&nm)));
    let free = cover::generic_rank(&ci.ideal, &cov.base_vars)?;
    r.insert("ci_rank".into(), json!(free));
    let v = vec![Verdict::new("ci-free", free == ci.d_product, format!("rank of the approximation {free} vs D {}", ci.d_product))];
    Ok((r, v))
}

fn fiber_json(ctx: &Ctx, f: &blowup::FiberReport) -> Value {
    let nm = ctx.names();
    let pts: Vec<Value> = f
        .distinct
        .iter()
        .map(|p| json!({"chart": nm[p.exceptional_var], "coords": p.coords, "projective": p.projective, "multiplicity": p.multiplicity}))
        .collect();
    json!(pts)
}

fn cmd_blowup(ctx: &Ctx) -> Out {
    let (x, c, ch) = ctx.center()?;
    let nm = ctx.names();
    let f = blowup::exceptional_fibers(&x, &c, ctx.q, ctx.o.nmax)?;
    let mut r = Map::new();
    if let Some(ch) = &ch {
        r.insert("change".into(), ctx.change_json(ch, nm));
    }
    let charts: Vec<Value> = f
        .charts
        .iter()
        .map(|d| {
            let subs: Vec<String> = d.chart.cut.iter().map(|&v| format!("{} -> {}", nm[v], d.chart.images[v].fmt_with(nm))).collect();
            Ok(json!({
                "exceptional": nm[d.chart.exceptional_var],
                "substitution": subs,
                "strict_transform": ctx.fmt_ideal(&d.strict_transform)?,
                "orders": d.order_drops,
            }))
        })
        .collect::<Result<_, Error>>()?;
    r.insert("charts".into(), json!(charts));
    r.insert("source_multiplicity".into(), json!(f.source_multiplicity));
    r.insert("fiber_points".into(), fiber_json(ctx, &f));
    r.insert("max_fiber_multiplicity".into(), json!(f.max_multiplicity));
    let v = vec![Verdict::new("chart-gluing", f.gluing_consistent, "multiplicities agree across overlapping charts")];
    Ok((r, v))
}

fn sequence_centers(ctx: &Ctx) -> Result<Vec<Center>, Error> {
    let specs = if ctx.p.sequence.is_empty() { ctx.p.center.iter().cloned().collect() } else { ctx.p.sequence.clone() };
    specs
        .iter()
        .map(|s| match s {
            CenterSpec::Vars(v) => Center::new(ctx.n(), v),
            CenterSpec::Forms(_) => Err(Error::InvalidInput("sequences take coordinate centers".into())),
        })
        .collect()
}

fn run_sequence(ctx: &Ctx) -> Result<(CoverPresentation, blowup::SequenceReport), Error> {
    let (cov, ci) = ctx.cover()?;
    let centers = sequence_centers(ctx)?;
    let rep = blowup::run_sequence(&cov, &ci, &centers, ctx.q, ctx.o.nmax, ctx.o.depth)?;
    Ok((cov, rep))
}

fn sequence_json(ctx: &Ctx, cov: &CoverPresentation, rep: &blowup::SequenceReport) -> Map<String, Value> {
    let nm = ctx.cover_names(cov);
    let mut r = Map::new();
    r.insert("generic_rank".into(), json!(rep.generic_rank));
    r.insert("d_product".into(), json!(rep.d_product));
    r.insert("source_multiplicity".into(), json!(rep.source_multiplicity));
    r.insert("stratum_dim".into(), json!(rep.stratum_dim));
    let stages: Vec<Value> = rep
        .stages
        .iter()
        .map(|s| {
            let mut v = serde_json::to_value(s).expect("stage serializes");
            v["path"] = json!(s.path.iter().map(|&i| nm[i].clone()).collect::<Vec<_>>());
            v
        })
        .collect();
    r.insert("stages".into(), json!(stages));
    r
}

fn stage_label(ctx: &Ctx, cov: &CoverPresentation, s: &blowup::SequenceStage) -> String {
    let nm = ctx.cover_names(cov);
    let path: Vec<String> = s.path.iter().map(|&i| nm[i].clone()).collect();
    format!("stage {} path [{}]", s.stage, path.join(" "))
}

fn cmd_sequence(ctx: &Ctx) -> Out {
    let (cov, rep) = run_sequence(ctx)?;
    let failing = rep.stages.iter().find(|s| !s.pass()).map(|s| stage_label(ctx, &cov, s));
    let v = vec![Verdict::new("sequence-audit", rep.pass, format!("{} stages audited", rep.stages.len())).with_witness(failing)];
    Ok((sequence_json(ctx, &cov, &rep), v))
}

fn verify(ctx: &Ctx, t: VerifyTarget) -> Out {
    let mut r = Map::new();
    let nm = ctx.names();
    let v = match t {
        VerifyTarget::Dade => {
            let (x, c, _) = ctx.center()?;
            let d = blowup::dade_check(&x, &c, ctx.q, ctx.o.nmax)?;
            r.insert("source_multiplicity".into(), json!(d.fibers.source_multiplicity));
            r.insert("max_fiber_multiplicity".into(), json!(d.fibers.max_multiplicity));
            r.insert("dropped".into(), json!(d.dropped));
            r.insert("fiber_points".into(), fiber_json(ctx, &d.fibers));
            let w = d.violation.as_ref().map(|p| format!("chart-{}:{}", nm[p.exceptional_var], coords(&p.coords)));
            vec![Verdict::new("dade", d.pass, format!("fiber maximum {:?} <= {}", d.fibers.max_multiplicity, d.fibers.source_multiplicity))
                .with_witness(w)]
        }
        VerifyTarget::Th14 => {
            let (x, c, _) = ctx.center()?;
            let e = equimult::equimultiplicity_test(&x, &c)?;
            r.insert("equimultiplicity".into(), serde_json::to_value(&e).expect("verdict serializes"));
            vec![Verdict::new(
                "th14",
                e.agree,
                format!("e {} vs generic {}; spread {} vs height {}", e.multiplicity_at_point, e.generic_multiplicity, e.analytic_spread, e.height),
            )]
        }
        VerifyTarget::Th211 => {
            let (x, c, _) = ctx.center()?;
            let n = equimult::th211_check(&x, &c)?;
            r.insert("nilpotency".into(), serde_json::to_value(&n).expect("verdict serializes"));
            vec![Verdict::new("th211", n.agree, format!("nilpotent kernel {} vs equimultiple {}", n.nilpotent_kernel, n.equimultiple))]
        }
        VerifyTarget::T1 => {
            let (x, c, _) = ctx.center()?;
            let f = blowup::fiber_containment_check(&x, &c, ctx.q, ctx.o.nmax)?;
            r.insert("stratum".into(), json!(ctx.fmt_space(&f.stratum)));
            r.insert("center_space".into(), json!(ctx.fmt_space(&f.center_space)));
            let per: Vec<Value> = f.persistent.iter().map(|p| json!({"chart": nm[p.exceptional_var], "projective": p.projective})).collect();
            r.insert("persistent".into(), json!(per));
            let w = f.outside.first().map(|p| format!("chart-{}:{}", nm[p.exceptional_var], coords(&p.coords)));
            vec![Verdict::new("t1", f.pass, format!("{} persistent points, {} outside", f.persistent.len(), f.outside.len())).with_witness(w)]
        }
        VerifyTarget::T2 => {
            let (cov, rep) = run_sequence(ctx)?;
            r = sequence_json(ctx, &cov, &rep);
            let bad = rep.stages.iter().find(|s| !s.dim_audit);
            let dims: Vec<Option<usize>> = rep.stages.iter().filter(|s| s.persistent).map(|s| s.locus_local_dim).collect();
            vec![Verdict::new("t2", bad.is_none(), format!("persistent locus dims {dims:?} against D = {}", rep.stratum_dim))
                .with_witness(bad.map(|s| stage_label(ctx, &cov, s)))]
        }
        VerifyTarget::Th16 | VerifyTarget::LocusEquality => {
            let (cov, ci) = ctx.cover()?;
            let l = cover::verify_locus_equality(&cov, &ci, ctx.q, ctx.o.nmax)?;
            r.insert("generic_rank".into(), json!(l.generic_rank));
            r.insert("d_product".into(), json!(l.d_product));
            r.insert("top_b".into(), pts(&l.top_b));
            r.insert("top_ci".into(), pts(&l.top_ci));
            r.insert("locus".into(), pts(&l.locus));
            r.insert("rank_bounds_multiplicity".into(), json!(l.rank_bounds_multiplicity));
            r.insert("injective_on_top".into(), json!(l.injective_on_top));
            let (sb, sc, sl): (BTreeSet<_>, BTreeSet<_>, BTreeSet<_>) =
                (l.top_b.iter().collect(), l.top_ci.iter().collect(), l.locus.iter().collect());
            if t == VerifyTarget::Th16 {
                let w = sb.symmetric_difference(&sc).chain(sc.symmetric_difference(&sl)).next().map(|p| format!("cover:{}", coords(p)));
                vec![Verdict::new(
                    "th16",
                    l.equal && l.rank_bounds_multiplicity && l.injective_on_top,
                    format!("{} / {} / {} points over GF({})", l.top_b.len(), l.top_ci.len(), l.locus.len(), ctx.q),
                )
                .with_witness(w)]
            } else {
                let w = sb.symmetric_difference(&sc).next().map(|p| format!("cover:{}", coords(p)));
                vec![Verdict::new("locus-equality", sb == sc, format!("{} vs {} top points", sb.len(), sc.len())).with_witness(w)]
            }
        }
        VerifyTarget::Th57 | VerifyTarget::DimensionDrop => {
            let (cov, ci) = ctx.cover()?;
            let g = ctx.p.g_b.clone().ok_or(Error::InvalidInput("the problem declares no g_b".into()))?;
            let g = g.translate(&ctx.p.point_or_origin());
            let g = cov.change.apply(&g);
            let d = cover::dimension_drop_check(&cov, &ci, &g, ctx.p.distinguished, ctx.q, ctx.o.nmax)?;
            let cn = ctx.cover_names(&cov);
            r.insert("distinguished".into(), json!(cn[d.distinguished_var]));
            r.insert("b".into(), json!(d.b));
            r.insert("s".into(), json!(d.s));
            r.insert("hypothesis_a".into(), json!(d.hypothesis_a));
            r.insert("top_b".into(), pts(&d.top_b));
            r.insert("top_bbar".into(), pts(&d.top_bbar));
            let hyp = Verdict::new("hypothesis-a", d.hypothesis_a, "top points project into the order-b locus of g_b")
                .with_witness(d.witness.as_ref().map(|p| format!("cover:{}", coords(p))));
            let sb: BTreeSet<_> = d.top_b.iter().collect();
            let st: BTreeSet<_> = d.top_bbar.iter().collect();
            let w = sb.symmetric_difference(&st).next().map(|p| format!("cover:{}", coords(p)));
            let eq = Verdict::new("dimension-drop", d.equal, format!("{} vs {} top points", d.top_b.len(), d.top_bbar.len())).with_witness(w);
            if t == VerifyTarget::Th57 {
                vec![hyp, eq]
            } else {
                vec![eq]
            }
        }
    };
    Ok((r, v))
}

/// Recomputes the oracle multiplicity at a witness `scheme:coords`.
fn replay(ctx: &Ctx, w: &str) -> Out {
    let (scheme, c) = w.split_once(':').ok_or(Failure::Parse("witness must look like `scheme:c1,c2,...`".into()))?;
    let point: Vec<u32> = c
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| Failure::Parse(format!("bad coordinate `{s}`"))))
        .collect::<Result<_, _>>()?;
    if point.len() != ctx.n() {
        return Err(Failure::Parse(format!("witness has {} coordinates, ring has {}", point.len(), ctx.n())));
    }
    let ideal = match scheme {
        "ideal" => ctx.ideal(),
        "centered" => ctx.centered()?,
        "cover" => ctx.cover()?.0.relation_ideal,
        "ci" => ctx.cover()?.1.ideal,
        s if s.starts_with("chart-") => {
            let name = &s["chart-".len()..];
            let v = ctx.names().iter().position(|x| x == name).ok_or(Failure::Parse(format!("unknown chart `{name}`")))?;
            let (x, c, _) = ctx.center()?;
            let chart = blowup::blowup_charts(x.field(), &c)
                .into_iter()
                .find(|ch| ch.exceptional_var == v)
                .ok_or(Failure::Parse(format!("`{name}` is not a cutting variable")))?;
            blowup::strict_transform_ideal(&x.ideal, &chart)?
        }
        other => return Err(Failure::Parse(format!("unknown witness scheme `{other}`"))),
    };
    let gens = ctx.oracle_gens(&ideal)?;
    let f = Field::prime(ctx.q)?;
    let pt = oracle::point_elems(f, &point);
    let on = gens.iter().all(|g| g.evaluate(&pt).is_zero());
    let mut r = Map::new();
    r.insert("witness".into(), json!(w));
    r.insert("on_scheme".into(), json!(on));
    if on {
        r.insert("multiplicity".into(), json!(oracle::mult_oracle(&gens, &pt, ctx.o.nmax)?));
    }
    Ok((r, vec![]))
}

fn oracle_modulus(p: &Problem, o: &Options) -> Result<u32, Error> {
    match (p.field, o.q) {
        (Field::Prime(c), Some(q)) if q != c => Err(Error::InvalidInput(format!("oracle modulus {q} differs from the field characteristic {c}"))),
        (Field::Prime(c), _) => Ok(c),
        (Field::Rational, Some(q)) => Field::prime(q).map(|_| q),
        (Field::Rational, None) => Ok(7),
    }
}

fn digest(text: &str, cmd: &Command, o: &Options) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.update(format!("\n--\n{}|{:?}|{:?}|{}|{}|{}|{}|{:?}", cmd.name(), o.field, o.q, o.nmax, o.budget, o.seed, o.depth, o.replay));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses the problem, runs the command and packages the outcome. Never panics on bad input.
pub fn dispatch(cmd: &Command, text: &str, o: &Options) -> Report {
    let start = Instant::now();
    random::set_seed(o.seed);
    groebner::set_step_budget(o.budget);
    let mut report = Report {
        schema: SCHEMA,
        command: cmd.name(),
        inputs_digest: digest(text, cmd, o),
        seed: o.seed,
        parameters: json!({"nmax": o.nmax, "budget": o.budget, "depth": o.depth}),
        results: json!({}),
        verdicts: vec![],
        budget: json!({"groebner_step_cap": o.budget}),
        error: None,
        elapsed: Default::default(),
    };
    let outcome = (|| -> Out {
        let p = parse_problem(text, o.field).map_err(|e| Failure::Parse(e.to_string()))?;
        let q = oracle_modulus(&p, o)?;
        report.parameters["field"] = json!(p.field.to_string());
        report.parameters["q"] = json!(q);
        let ctx = Ctx { p: &p, o, q };
        if let Some(w) = &o.replay {
            return replay(&ctx, w);
        }
        match cmd {
            Command::Mult => cmd_mult(&ctx),
            Command::Hs => cmd_hs(&ctx),
            Command::TangentCone => cmd_tangent_cone(&ctx),
            Command::Tau => cmd_tau(&ctx),
            Command::Stratify => cmd_stratify(&ctx),
            Command::ConeStratum => cmd_cone_stratum(&ctx),
            Command::Cover => cmd_cover(&ctx),
            Command::Ci => cmd_ci(&ctx),
            Command::Blowup => cmd_blowup(&ctx),
            Command::Sequence => cmd_sequence(&ctx),
            Command::Verify(t) => verify(&ctx, *t),
        }
    })();
    match outcome {
        Ok((r, v)) => {
            report.results = Value::Object(r);
            report.verdicts = v;
        }
        Err(Failure::Parse(m)) => report.error = Some(ErrorInfo { code: "E_PARSE".into(), message: m }),
        Err(Failure::Module(e)) => report.error = Some(ErrorInfo { code: e.code().into(), message: e.to_string() }),
    }
    report.elapsed = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const UMBRELLA: &str = "field GF(7)\nvars x y z\nideal x^2 - y^2*z\npoint 0 0 0\ncenter origin\n";

    #[test]
    fn mult_on_cusp() {
        let r = dispatch(&Command::Mult, "field Q\nvars x y\nideal x^2 - y^3", &Options::default());
        assert_eq!(r.results["multiplicity"], json!(2));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn dade_on_umbrella() {
        let r = dispatch(&Command::Verify(VerifyTarget::Dade), UMBRELLA, &Options::default());
        assert_eq!(r.verdicts[0].status, "PASS");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn th16_on_monomial_curve() {
        let text = "field GF(7)\nvars x y z\nideal y^2 - x*z, x^3 - y*z, z^2 - x^2*y\ncover base x\n";
        let r = dispatch(&Command::Verify(VerifyTarget::Th16), text, &Options::default());
        assert_eq!(r.verdicts[0].status, "PASS", "{}", r.human());
    }

    #[test]
    fn errors_exit_with_two() {
        let r = dispatch(&Command::Mult, "vars x\nideal w", &Options::default());
        assert_eq!(r.exit_code(), 2);
        assert_eq!(r.error.as_ref().unwrap().code, "E_PARSE");
        let o = Options { q: Some(5), ..Options::default() };
        assert_eq!(dispatch(&Command::Mult, UMBRELLA, &o).exit_code(), 2);
    }

    #[test]
    fn rejected_center_fails_cleanly() {
        let text = "field GF(7)\nvars x y z\nideal x^2 - y^2*z\ncenter x z\n";
        let r = dispatch(&Command::Verify(VerifyTarget::Dade), text, &Options::default());
        assert_eq!(r.error.as_ref().unwrap().code, "E_CENTER");
    }

    #[test]
    fn replay_reproduces_a_witness() {
        let o = Options { replay: Some("chart-z:0,0,0".into()), ..Options::default() };
        let r = dispatch(&Command::Verify(VerifyTarget::Dade), UMBRELLA, &o);
        assert_eq!(r.results["multiplicity"], json!(2));
    }

    #[test]
    fn canonical_json_is_stable() {
        let a = dispatch(&Command::Verify(VerifyTarget::T1), UMBRELLA, &Options::default()).canonical_json();
        let b = dispatch(&Command::Verify(VerifyTarget::T1), UMBRELLA, &Options::default()).canonical_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"multstrat.report/1\""));
        assert!(!a.contains("elapsed"));
    }
}
