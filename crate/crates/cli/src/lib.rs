//! Batch front end: one JSON request document in, one factor report out.
//!
//! See the README for the document schema and the output grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use lsgamma::factors::{
    local_factors, plancherel, plancherel_decomposition, rs_gamma, rs_local_factors, stability_check,
    stability_scan, LanglandsQuotient, Param, PrincipalSeries, Request, R0,
};
use lsgamma::field::schema::{AddCharSpec, FieldSpec, MultCharSpec};
use lsgamma::field::{associate, characters_up_to, turn, AddChar, MultChar, Tracker, TruncatedField};
use lsgamma::galois::{artin_factors, deligne_transfer, WeilParam};
use lsgamma::par::Mode;
use lsgamma::root::{GSpinRootDatum, Parity};
use lsgamma::tate::tate_triple;
use lsgamma::{selftest, FactoredRF, QPower};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad command line or request document. Exit code 2.
    Usage,
    /// A computation refused or failed. Exit code 3.
    Computation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub class: ErrorClass,
    /// JSON pointer into the request document, when the problem has a location.
    pub pointer: Option<String>,
    pub message: String,
}

impl CliError {
    fn usage(pointer: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError { class: ErrorClass::Usage, pointer: Some(pointer.into()), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Usage => 2,
            ErrorClass::Computation => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.class, &self.pointer) {
            (ErrorClass::Usage, Some(p)) => write!(f, "usage error at {}: {}", if p.is_empty() { "/" } else { p }, self.message),
            (ErrorClass::Usage, None) => write!(f, "usage error: {}", self.message),
            (ErrorClass::Computation, _) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lsgamma::Error> for CliError {
    fn from(e: lsgamma::Error) -> CliError {
        CliError { class: ErrorClass::Computation, pointer: None, message: e.to_string() }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Attach a document location to a library error raised while building input.
fn at<T>(pointer: &str, r: lsgamma::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::usage(pointer, e.to_string()))
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

// ---- request document ----

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub characters: BTreeMap<String, MultCharSpec>,
    pub psi: Option<AddCharSpec>,
    /// `factor tate`.
    pub character: Option<String>,
    pub parameter: Option<ParamSpec>,
    /// Second parameter for `factor rs` and `stability-demo`.
    pub parameter2: Option<ParamSpec>,
    pub r0: Option<String>,
    pub eta: Option<String>,
    /// Characters of a Weil parameter, for `factor artin` and `transfer-check`.
    pub weil: Option<Vec<String>>,
    pub partition: Option<Vec<usize>>,
    pub rootdatum: Option<RootDatumSpec>,
    pub transfer: Option<TransferSpec>,
    #[serde(default)]
    pub options: DocOptions,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ParamSpec {
    Principal(Vec<String>),
    Quotient(Vec<BlockSpec>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub chars: Vec<String>,
    /// Real twist as a rational, e.g. `"1/2"`.
    pub s: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumSpec {
    pub n: usize,
    pub parity: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSpec {
    pub target: FieldSpec,
    pub level: usize,
    pub target_psi: Option<AddCharSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocOptions {
    #[serde(default)]
    pub eval: Vec<String>,
    #[serde(default)]
    pub scan_threshold: bool,
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
}

/// Parse a request document; schema violations carry a JSON pointer.
pub fn parse_document(text: &str) -> Result<Document> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer: String = e
            .path()
            .iter()
            .filter_map(|s| match s {
                serde_path_to_error::Segment::Seq { index } => Some(format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => Some(format!("/{}", escape(key))),
                serde_path_to_error::Segment::Enum { variant } => Some(format!("/{}", escape(variant))),
                serde_path_to_error::Segment::Unknown => None,
            })
            .collect();
        CliError::usage(pointer, e.into_inner().to_string())
    })
}

// ---- commands ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Tate,
    Twisted,
    Rs,
    Artin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Factor(FactorKind),
    Plancherel,
    RootDatum,
    TransferCheck,
    StabilityDemo,
    SelfTest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Factor(FactorKind::Tate) => "factor tate",
            Command::Factor(FactorKind::Twisted) => "factor twisted",
            Command::Factor(FactorKind::Rs) => "factor rs",
            Command::Factor(FactorKind::Artin) => "factor artin",
            Command::Plancherel => "plancherel",
            Command::RootDatum => "rootdatum",
            Command::TransferCheck => "transfer-check",
            Command::StabilityDemo => "stability-demo",
            Command::SelfTest => "selftest",
        }
    }

    pub fn needs_document(&self) -> bool {
        *self != Command::SelfTest
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub eval: Vec<Complex64>,
    pub scan_threshold: bool,
    pub format: Option<Format>,
}

/// Parse `s=a+bi` (also `a+bi`, `a`, `bi`).
pub fn parse_eval(text: &str) -> Result<Complex64> {
    let body = text.trim().strip_prefix("s=").unwrap_or(text.trim());
    Complex64::from_str(&body.replace(' ', ""))
        .map_err(|_| CliError { class: ErrorClass::Usage, pointer: None, message: format!("cannot read `{text}` as s=a+bi") })
}

// ---- output ----

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub s: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorOut {
    pub name: String,
    /// Canonical factored form; re-parses with `lsgamma::arith::parse_rf`.
    pub form: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Output {
    pub command: String,
    pub q: Option<u64>,
    pub factors: Vec<FactorOut>,
    pub facts: Vec<Fact>,
    pub notes: Vec<String>,
    /// False when an assertion made by the command failed.
    pub ok: bool,
    #[serde(skip)]
    pub format: Format,
}

fn complex_text(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    format!("{re:.12}{}{:.12}i", if im < 0.0 { "-" } else { "+" }, im.abs())
}

impl Output {
    fn new(cmd: Command, q: Option<u64>, format: Format) -> Output {
        Output { command: cmd.name().to_string(), q, factors: Vec::new(), facts: Vec::new(), notes: Vec::new(), ok: true, format }
    }

    fn factor(&mut self, name: &str, f: &FactoredRF, points: &[Complex64]) {
        let evaluations = points
            .iter()
            .map(|&s| Evaluation {
                s: complex_text(s),
                value: match f.eval(s) {
                    Ok(v) => complex_text(v),
                    Err(_) => "pole".to_string(),
                },
            })
            .collect();
        self.factors.push(FactorOut { name: name.to_string(), form: f.to_string(), evaluations });
    }

    fn fact(&mut self, name: &str, value: impl ToString) {
        self.facts.push(Fact { name: name.to_string(), value: value.to_string() });
    }

    fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    fn assert(&mut self, name: &str, ok: bool) {
        self.fact(name, if ok { "holds" } else { "FAILS" });
        self.ok &= ok;
    }

    pub fn render(&self) -> String {
        match self.format {
            Format::Json => serde_json::to_string_pretty(self).expect("plain data") + "\n",
            Format::Text => {
                let mut s = format!("# {}\n", self.command);
                if let Some(q) = self.q {
                    s += &format!("q = {q}\n");
                }
                for f in &self.factors {
                    s += &format!("{} = {}\n", f.name, f.form);
                    for e in &f.evaluations {
                        s += &format!("  {}({}) = {}\n", f.name, e.s, e.value);
                    }
                }
                for f in &self.facts {
                    s += &format!("{}: {}\n", f.name, f.value);
                }
                for n in &self.notes {
                    s += &format!("note: {n}\n");
                }
                s
            }
        }
    }
}

const CONVENTION: &str = "Z = q^-s; eps(s, chi, psi) = q^(-n/2) G(chi, psi) Z^(a-n), n the conductor of psi, a that of chi";
const EXPONENT: &str =
    "psi-dependence uses det(r0(sigma) ⊗ eta) = omega^(n±1) eta^(dim r0), so eta enters with exponent dim r0";

// ---- request context ----

struct Ctx {
    field: TruncatedField,
    chars: BTreeMap<String, MultChar>,
    psi: AddChar,
}

impl Ctx {
    fn new(doc: &Document) -> Result<Ctx> {
        let spec = doc.field.as_ref().ok_or_else(|| CliError::usage("/field", "missing field spec"))?;
        let field = at("/field", spec.build())?;
        let mut chars = BTreeMap::new();
        for (name, c) in &doc.characters {
            chars.insert(name.clone(), at(&format!("/characters/{}", escape(name)), c.build(&field))?);
        }
        let psi = match &doc.psi {
            Some(p) => at("/psi", p.build(&field))?,
            None => AddChar::canonical(&field),
        };
        Ok(Ctx { field, chars, psi })
    }

    fn char(&self, name: &str, pointer: &str) -> Result<MultChar> {
        self.chars
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::usage(pointer, format!("no character named `{name}`")))
    }

    fn chars(&self, names: &[String], pointer: &str) -> Result<Vec<MultChar>> {
        names.iter().enumerate().map(|(i, n)| self.char(n, &format!("{pointer}/{i}"))).collect()
    }

    fn principal(&self, names: &[String], pointer: &str) -> Result<PrincipalSeries> {
        at(pointer, PrincipalSeries::new(self.chars(names, pointer)?))
    }

    fn param(&self, spec: &ParamSpec, pointer: &str) -> Result<Param> {
        match spec {
            ParamSpec::Principal(names) => Ok(Param::Principal(self.principal(names, &format!("{pointer}/principal"))?)),
            ParamSpec::Quotient(blocks) => {
                let mut out = Vec::new();
                for (i, b) in blocks.iter().enumerate() {
                    let here = format!("{pointer}/quotient/{i}");
                    let s = Ratio::<i64>::from_str(b.s.trim())
                        .map_err(|_| CliError::usage(format!("{here}/s"), format!("`{}` is not a rational number", b.s)))?;
                    out.push((self.principal(&b.chars, &format!("{here}/chars"))?, s));
                }
                Ok(Param::Quotient(at(pointer, LanglandsQuotient::new(out))?))
            }
        }
    }
}

fn required<'a, T>(x: &'a Option<T>, pointer: &str) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| CliError::usage(pointer, "required for this command"))
}

fn r0_of(doc: &Document) -> Result<R0> {
    at("/r0", R0::from_str(required(&doc.r0, "/r0")?))
}

fn request(ctx: &Ctx, doc: &Document) -> Result<Request> {
    let param = ctx.param(required(&doc.parameter, "/parameter")?, "/parameter")?;
    let eta = ctx.char(required(&doc.eta, "/eta")?, "/eta")?;
    at("/parameter", Request::new(param, r0_of(doc)?, eta, ctx.psi.clone()))
}

// ---- run ----

/// Run one command. `doc` is the request document text; `selftest` ignores it.
pub fn run(cmd: Command, doc: Option<&str>, opts: &Options) -> Result<Output> {
    let document = match doc {
        Some(text) => parse_document(text)?,
        None if cmd.needs_document() => {
            return Err(CliError { class: ErrorClass::Usage, pointer: None, message: format!("`{}` needs a request document", cmd.name()) })
        }
        None => Document::default(),
    };
    let mut points = opts.eval.clone();
    for (i, e) in document.options.eval.iter().enumerate() {
        points.push(parse_eval(e).map_err(|err| CliError::usage(format!("/options/eval/{i}"), err.message))?);
    }
    let format = opts.format.or(document.options.format).unwrap_or(Format::Text);
    let scan = opts.scan_threshold || document.options.scan_threshold;
    match cmd {
        Command::SelfTest => Ok(selftest_output(format)),
        Command::RootDatum => rootdatum(&document, format),
        _ => {
            let ctx = Ctx::new(&document)?;
            let mut out = Output::new(cmd, Some(ctx.field.q()), format);
            let tr = Tracker::new();
            match cmd {
                Command::Factor(kind) => factor(kind, &ctx, &document, &points, &tr, &mut out)?,
                Command::Plancherel => plancherel_cmd(&ctx, &document, &points, &tr, &mut out)?,
                Command::TransferCheck => transfer(&ctx, &document, &points, &mut out)?,
                Command::StabilityDemo => stability(&ctx, &document, scan, &points, &tr, &mut out)?,
                Command::SelfTest | Command::RootDatum => unreachable!(),
            }
            Ok(out)
        }
    }
}

fn factor(kind: FactorKind, ctx: &Ctx, doc: &Document, pts: &[Complex64], tr: &Tracker, out: &mut Output) -> Result<()> {
    match kind {
        FactorKind::Tate => {
            let chi = ctx.char(required(&doc.character, "/character")?, "/character")?;
            let t = tate_triple(&chi, &ctx.psi, tr)?;
            out.factor("L", &t.l, pts);
            out.factor("eps", &t.eps, pts);
            out.factor("gamma", &t.gamma, pts);
            out.fact("provenance", t.provenance.tag());
            out.note(CONVENTION);
        }
        FactorKind::Twisted => {
            let req = request(ctx, doc)?;
            let f = local_factors(&req, tr)?;
            out.factor("gamma", &f.gamma, pts);
            out.factor("L", &f.l, pts);
            out.factor("eps", &f.eps, pts);
            out.fact("r0", format!("{} (dim {})", req.r0.name(), req.r0.dim(req.n())));
            out.note(CONVENTION);
            out.note(EXPONENT);
        }
        FactorKind::Rs => {
            let p1 = ctx.param(required(&doc.parameter, "/parameter")?, "/parameter")?.flatten();
            let p2 = ctx.param(required(&doc.parameter2, "/parameter2")?, "/parameter2")?.flatten();
            if p1.is_unitary() && p2.is_unitary() {
                let f = rs_local_factors(&p1, &p2, &ctx.psi, tr)?;
                out.factor("gamma", &f.gamma, pts);
                out.factor("L", &f.l, pts);
                out.factor("eps", &f.eps, pts);
            } else {
                out.factor("gamma", &rs_gamma(&p1, &p2, &ctx.psi, tr)?, pts);
                out.note("L and eps are reported for unitary data only");
            }
            out.note(CONVENTION);
        }
        FactorKind::Artin => {
            let sigma = WeilParam::new(&ctx.field, ctx.chars(required(&doc.weil, "/weil")?, "/weil")?)?;
            let rho = match &doc.r0 {
                Some(_) => {
                    let eta = ctx.char(required(&doc.eta, "/eta")?, "/eta")?;
                    sigma.r0_compose(r0_of(doc)?, &eta)?
                }
                None => sigma,
            };
            let f = artin_factors(&rho, &ctx.psi, tr)?;
            out.factor("gamma", &f.gamma, pts);
            out.factor("L", &f.l, pts);
            out.factor("eps", &f.eps, pts);
            out.fact("dim rho", rho.dim());
            out.note(CONVENTION);
        }
    }
    Ok(())
}

fn plancherel_cmd(ctx: &Ctx, doc: &Document, pts: &[Complex64], tr: &Tracker, out: &mut Output) -> Result<()> {
    let req = request(ctx, doc)?;
    let mu = plancherel(&req, tr)?;
    out.factor("mu'", &mu, pts);
    if let Some(part) = &doc.partition {
        let (terms, total) = at("/partition", plancherel_decomposition(&req, part, tr))?;
        for t in &terms {
            out.factor(&format!("mu'[{}]", t.label), &t.mu, pts);
        }
        out.assert("product of terms equals mu'", total == mu);
    }
    out.note("mu' = gamma(s, pi, r0 ⊠ eta, psi) gamma(-s, pi^v, r0 ⊠ eta^-1, psi^-1); the constant gamma_w0(G/P)^2 is omitted");
    Ok(())
}

fn transfer(ctx: &Ctx, doc: &Document, pts: &[Complex64], out: &mut Output) -> Result<()> {
    let spec = required(&doc.transfer, "/transfer")?;
    let target = at("/transfer/target", spec.target.build())?;
    let psi2 = match &spec.target_psi {
        Some(p) => at("/transfer/target_psi", p.build(&target))?,
        None => {
            let mut s = AddCharSpec::of(&ctx.psi);
            s.scale_unit.truncate(target.level());
            at("/transfer/target_psi", s.build(&target))?
        }
    };
    let sigma = WeilParam::new(&ctx.field, ctx.chars(required(&doc.weil, "/weil")?, "/weil")?)?;
    let eta = ctx.char(required(&doc.eta, "/eta")?, "/eta")?;
    let r0 = r0_of(doc)?;
    let mut tied = sigma.chars().to_vec();
    tied.push(eta.clone());
    let cert = at("/transfer", associate(&ctx.field, &target, spec.level, &tied, &[(ctx.psi.clone(), psi2.clone())]))?;
    let rep = deligne_transfer(&cert, &sigma, r0, &eta, (&ctx.psi, &psi2))?;
    out.factor("gamma (source)", &rep.source.gamma, pts);
    out.factor("gamma (target)", &rep.target.gamma, pts);
    out.factor("L (source)", &rep.source.artin.l, pts);
    out.factor("L (target)", &rep.target.artin.l, pts);
    out.factor("eps (source)", &rep.source.artin.eps, pts);
    out.factor("eps (target)", &rep.target.artin.eps, pts);
    out.fact("association level", cert.level);
    out.fact("read bound", rep.read_bound);
    out.fact("levels read", format!("{} / {}", rep.source.purity.level_read, rep.target.purity.level_read));
    out.assert("factors identical", rep.equal());
    out.assert("purity", rep.pure());
    Ok(())
}

fn stability(ctx: &Ctx, doc: &Document, scan: bool, pts: &[Complex64], tr: &Tracker, out: &mut Output) -> Result<()> {
    let p1 = ctx.param(required(&doc.parameter, "/parameter")?, "/parameter")?.flatten();
    let p2 = ctx.param(required(&doc.parameter2, "/parameter2")?, "/parameter2")?.flatten();
    let r0 = r0_of(doc)?;
    if scan {
        let all = characters_up_to(&ctx.field, ctx.field.level(), turn(0, 1), QPower::zero());
        let etas: Vec<MultChar> = (1..=ctx.field.level())
            .filter_map(|a| all.iter().rev().find(|c| c.conductor() == a).cloned())
            .collect();
        let (rows, minimal) = stability_scan(&p1, &p2, r0, &etas, &ctx.psi, tr)?;
        for row in rows {
            let closed = match row.closed_form_matches {
                Some(true) => "closed form matches",
                Some(false) => "closed form differs",
                None => "no closed form",
            };
            out.fact(&format!("a(eta) = {}", row.conductor), format!("{}, {closed}", if row.equal { "equal" } else { "different" }));
        }
        let m = p1.max_conductor().max(p2.max_conductor());
        out.fact("observed threshold", minimal.map_or("none".to_string(), |a| a.to_string()));
        out.fact("guaranteed threshold", 2 * m + 2);
    } else {
        let eta = ctx.char(required(&doc.eta, "/eta")?, "/eta")?;
        let rep = stability_check(&p1, &p2, r0, &eta, &ctx.psi, true, tr)?;
        out.factor("gamma 1", &rep.gamma1, pts);
        out.factor("gamma 2", &rep.gamma2, pts);
        out.factor("closed form", &rep.closed_form, pts);
        out.fact("v(c)", rep.c_valuation);
        out.assert("gammas equal", rep.equal());
        out.assert("closed form matches", rep.closed_form_matches());
    }
    Ok(())
}

fn rootdatum(doc: &Document, format: Format) -> Result<Output> {
    let spec = required(&doc.rootdatum, "/rootdatum")?;
    let parity = at("/rootdatum/parity", Parity::from_str(&spec.parity))?;
    let d = at("/rootdatum", GSpinRootDatum::new(spec.n, parity))?;
    let mut out = Output::new(Command::RootDatum, None, format);
    let rows: Vec<String> = d
        .cartan()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    out.fact("group", parity.group_name(spec.n));
    out.fact("type", parity.cartan_type(spec.n));
    out.fact("cartan", format!("[{}]", rows.join(",")));
    out.fact("weyl order", d.weyl_order());
    let w0 = d.siegel_w0();
    let word: Vec<String> = w0.word.iter().map(|i| (i + 1).to_string()).collect();
    out.fact("siegel w0", format!("s[{}]", word.join(",")));
    out.fact("l(w0)", w0.length());
    let (a, b) = d.adjoint_data();
    out.fact("dim r0", a);
    out.fact("measure exponent", b);
    out.fact("self-associate", d.is_self_associate());
    if let Some(part) = &doc.partition {
        let dec = at("/partition", d.langlands_decomposition(part))?;
        for f in &dec.factors {
            let word: Vec<String> = f.elt.word.iter().map(|i| (i + 1).to_string()).collect();
            out.fact(&f.label.to_string(), format!("s[{}] (length {})", word.join(","), f.elt.length()));
        }
        out.assert("product equals w0", dec.product() == w0.matrix);
        out.assert("lengths add up", dec.total_length() == w0.length());
    }
    Ok(out)
}

fn selftest_output(format: Format) -> Output {
    let mut out = Output::new(Command::SelfTest, None, format);
    for o in selftest::run_all(Mode::default()) {
        out.fact(&format!("criterion {}", o.id), o.summary());
        for e in &o.examples {
            out.note(&format!("criterion {}: {e}", o.id));
        }
        out.ok &= o.passed();
    }
    out
}
