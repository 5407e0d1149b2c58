use crate::config::{Command, RunConfig};
use planefield::dists::{CompoundParams, CountFamily, CountLaw, FieldParams};
use planefield::fields::limits::LimitVariant;
use planefield::fields::{
    count_draw, inverse_stable_draw, ml_compound_direct, replicate, sample_brownian_sheet,
    sample_cprf, sample_prf_points, sample_stable_sheet, stable_draw, GridSpec, NodeArray, Rect,
};
use planefield::pdecheck::{run_pde_check, PdeCheck, PdeOptions, ResidualGrid};
use planefield::specfun::SeriesControl;
use planefield::verify::{
    check_covariance, check_increment_properties, check_limit, check_timechange, PointPair,
    TimeChangeVariant, DEFAULT_U_GRID,
};
use planefield::{ComparisonReport, Error};
use serde::Serialize;

/// Point pairs of the default covariance check.
pub const COVARIANCE_PAIRS: [PointPair; 4] = [
    ((1.0, 1.0), (2.0, 2.0)),
    ((1.0, 2.0), (2.0, 1.0)),
    ((2.0, 1.0), (1.0, 2.0)),
    ((2.0, 2.0), (1.0, 1.0)),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => planefield::io::fmt_real(*x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn reals(columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Self {
        let mut t = Table::new(columns);
        t.rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Cell::Real).collect())
            .collect();
        t
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Table(Table),
    Report {
        report: ComparisonReport,
        table: Option<Table>,
    },
}

impl Artifact {
    pub fn passed(&self) -> bool {
        match self {
            Artifact::Table(_) => true,
            Artifact::Report { report, .. } => report.passed,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => RunError::Usage(m),
            other => RunError::Numeric(other),
        }
    }
}

type Result<T> = std::result::Result<T, RunError>;

fn need<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| RunError::Usage(format!("--{what} is required")))
}

/// Orders from the flags; `alpha` feeds beta when `beta_first`, the time orders otherwise.
fn field_params(c: &RunConfig, beta_first: bool) -> Result<FieldParams> {
    let (a1, a2, b) = if beta_first {
        (c.alpha1, c.alpha2, c.beta.or(c.alpha))
    } else {
        (c.alpha1.or(c.alpha), c.alpha2.or(c.alpha), c.beta)
    };
    Ok(FieldParams::new(
        c.lambda,
        a1.unwrap_or(1.0),
        a2.unwrap_or(1.0),
        b.unwrap_or(1.0),
    )?)
}

pub fn run(c: &RunConfig) -> Result<Artifact> {
    match c.command {
        Command::Pmf => pmf(c),
        Command::Simulate => simulate(c),
        Command::Verify => verify(c),
        Command::Pde => pde(c),
        Command::Converge => converge(c),
    }
}

/// (t1, t2) alone, or every grid node off the axes when h is set.
fn grid_points(c: &RunConfig) -> Result<Vec<(f64, f64)>> {
    let Some(h) = c.h else {
        return Ok(vec![(c.t1, c.t2)]);
    };
    let g = GridSpec::with_step(c.t1, c.t2, h)?;
    Ok((1..=g.n1)
        .flat_map(|i| (1..=g.n2).map(move |j| (i, j)))
        .map(|(i, j)| (g.x1(i), g.x2(j)))
        .collect())
}

fn pmf(c: &RunConfig) -> Result<Artifact> {
    let family: CountFamily = need(&c.family, "family")?.parse()?;
    let p = field_params(c, family == CountFamily::Sfprf)?;
    let ctrl = SeriesControl::default();
    let mut t = Table::new(&["t1", "t2", "n", "p"]);
    for (a, b) in grid_points(c)? {
        let law = CountLaw::compute(family, a, b, &p, c.nmax, &ctrl)?;
        for (n, q) in law.pmf.iter().enumerate() {
            t.rows.push(vec![
                Cell::Real(a),
                Cell::Real(b),
                Cell::Int(n as i64),
                Cell::Real(*q),
            ]);
        }
    }
    Ok(Artifact::Table(t))
}

fn node_table(a: &NodeArray) -> Table {
    let g = a.grid;
    Table::reals(
        &["t1", "t2", "value"],
        (0..=g.n1).flat_map(|i| (0..=g.n2).map(move |j| vec![g.x1(i), g.x2(j), a.get(i, j)])),
    )
}

fn simulate(c: &RunConfig) -> Result<Artifact> {
    let family = need(&c.family, "family")?;
    let rect = Rect::origin(c.t1, c.t2)?;
    let (t1, t2, seed) = (c.t1, c.t2, c.seed);
    let draws = |f: &(dyn Fn(&mut planefield::fields::FieldRng) -> f64 + Sync)| {
        Table::reals(
            &["replication", "value"],
            replicate(seed, c.n, f)
                .into_iter()
                .enumerate()
                .map(|(i, v)| vec![i as f64, v]),
        )
    };
    let t = match family {
        "points" | "prf_points" => {
            let ps = sample_prf_points(c.lambda, &rect, seed)?;
            Table::reals(&["x", "y"], ps.points.iter().map(|&(x, y)| vec![x, y]))
        }
        "cprf_normal" | "cprf_exp" | "cprf_ml" => {
            let comp = match family {
                "cprf_normal" => CompoundParams::normal(),
                "cprf_exp" => CompoundParams::exponential(c.sigma)?,
                _ => CompoundParams::mittag_leffler(c.sigma, c.beta.or(c.alpha).unwrap_or(1.0))?,
            };
            let ps = sample_prf_points(c.lambda, &rect, seed)?;
            let f = sample_cprf(&ps, &comp, seed);
            Table::reals(
                &["x", "y", "mark"],
                f.points
                    .points
                    .iter()
                    .zip(&f.marks)
                    .map(|(&(x, y), &m)| vec![x, y, m]),
            )
        }
        "brownian_sheet" => node_table(&sample_brownian_sheet(
            &GridSpec::with_step(t1, t2, c.step())?,
            seed,
        )),
        "stable_sheet" => {
            let a = c.beta.or(c.alpha).unwrap_or(1.0);
            node_table(&sample_stable_sheet(
                a,
                &GridSpec::with_step(t1, t2, c.step())?,
                seed,
            )?)
        }
        "stable" | "inverse_stable" => {
            let a = c.beta.or(c.alpha).unwrap_or(1.0);
            FieldParams::space_fractional(1.0, a)?;
            if family == "stable" {
                draws(&|r| stable_draw(a, r))
            } else {
                draws(&|r| inverse_stable_draw(a, t1, r))
            }
        }
        "ml_compound" => {
            let b = c.beta.or(c.alpha).unwrap_or(1.0);
            CompoundParams::mittag_leffler(c.sigma, b)?;
            let (lam, s) = (c.lambda, c.sigma);
            draws(&|r| ml_compound_direct(t1, t2, lam, s, b, r))
        }
        other => {
            let fam: CountFamily = other.parse()?;
            let p = field_params(c, fam == CountFamily::Sfprf)?;
            draws(&|r| count_draw(fam, &p, t1, t2, r) as f64)
        }
    };
    Ok(Artifact::Table(t))
}

fn limit_variant(c: &RunConfig) -> Result<LimitVariant> {
    Ok(need(&c.variant, "variant")?.parse()?)
}

fn verify(c: &RunConfig) -> Result<Artifact> {
    let ctrl = SeriesControl::default();
    let report = match need(&c.check, "check")? {
        "timechange" => {
            let v: TimeChangeVariant = need(&c.variant, "variant")?.parse()?;
            let beta_first = matches!(v, TimeChangeVariant::Sfprf | TimeChangeVariant::MlCompound);
            let p = field_params(c, beta_first)?;
            let comp = match v {
                TimeChangeVariant::MlCompound => {
                    Some(CompoundParams::mittag_leffler(c.sigma, p.beta)?)
                }
                _ => None,
            };
            check_timechange(v, &p, comp.as_ref(), (c.t1, c.t2), c.n, c.seed, &ctrl)?
        }
        "covariance" => check_covariance(&COVARIANCE_PAIRS, c.n, c.seed)?,
        "limit" => {
            let v = limit_variant(c)?;
            let p = field_params(c, false)?;
            let parts = check_limit(
                v,
                &p,
                &c.scales,
                (c.t1, c.t2),
                &DEFAULT_U_GRID,
                c.n,
                c.seed,
                &ctrl,
            )?;
            ComparisonReport::all(format!("limit/{}", v.name()), parts)
        }
        "increments" => {
            let (a, b) = (c.t1, c.t2);
            let rects = [
                (Rect::new(0.0, a, 0.0, b)?, Rect::new(a, 2.0 * a, 0.0, b)?),
                (
                    Rect::new(0.0, a, 0.0, b)?,
                    Rect::new(a, 2.0 * a, b, 2.0 * b)?,
                ),
                (
                    Rect::new(0.0, a, 0.0, b)?,
                    Rect::new(0.5 * a, 1.5 * a, 0.0, b)?,
                ),
            ];
            check_increment_properties(c.lambda, &CompoundParams::normal(), &rects, c.n, c.seed)?
        }
        other => return Err(RunError::Usage(format!("unknown verify check '{other}'"))),
    };
    Ok(Artifact::Report {
        report,
        table: None,
    })
}

fn residual_table(g: &ResidualGrid) -> Table {
    let mut t = Table::new(&[&g.axes[0], &g.axes[1], "state", "residual"]);
    for (s, vals) in g.states.iter().zip(&g.values) {
        let n2 = g.coords2.len();
        for (i, a) in g.coords1.iter().enumerate() {
            for (j, b) in g.coords2.iter().enumerate() {
                t.rows.push(vec![
                    Cell::Real(*a),
                    Cell::Real(*b),
                    Cell::Int(*s as i64),
                    Cell::Real(vals[i * n2 + j]),
                ]);
            }
        }
    }
    t
}

fn pde(c: &RunConfig) -> Result<Artifact> {
    let check: PdeCheck = need(&c.check, "check")?.parse()?;
    let p = field_params(c, check == PdeCheck::Sfprf)?;
    let o = PdeOptions {
        params: p,
        sigma: c.sigma,
        n_max: c.nmax.min(10),
        t1: c.t1,
        t2: c.t2,
        h: c.step(),
        ctrl: SeriesControl::default(),
    };
    let (report, grid) = run_pde_check(check, &o)?;
    Ok(Artifact::Report {
        report,
        table: Some(residual_table(&grid)),
    })
}

fn converge(c: &RunConfig) -> Result<Artifact> {
    let v = limit_variant(c)?;
    let p = field_params(c, false)?;
    let ctrl = SeriesControl::default();
    let parts = check_limit(
        v,
        &p,
        &c.scales,
        (c.t1, c.t2),
        &DEFAULT_U_GRID,
        c.n,
        c.seed,
        &ctrl,
    )?;
    let t = Table {
        columns: ["n", "gap", "threshold", "passed"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: c
            .scales
            .iter()
            .zip(&parts)
            .map(|(&n, r)| {
                vec![
                    Cell::Real(n),
                    Cell::Real(r.value),
                    Cell::Real(r.threshold),
                    Cell::Int(r.passed as i64),
                ]
            })
            .collect(),
    };
    Ok(Artifact::Report {
        report: ComparisonReport::all(format!("converge/{}", v.name()), parts),
        table: Some(t),
    })
}
