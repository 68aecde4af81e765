//! One handler per subcommand. Inputs are parsed into typed views; domain
//! objects are then built through their validating constructors so that
//! domain failures exit with 1 and structural ones with 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tropav_core::arith::{self, Int, IVec, Rat};
use tropav_core::delaunay::{delaunay_subdivision, voronoi_cone_contains, QuadraticForm};
use tropav_core::linalg::{
    glxy_act, hermite_normal_form, polarization_type, smith_normal_form, symplectic_normal_form, IntegerMatrix,
    PolarizationType, RationalMatrix,
};
use tropav_core::monoid::{
    central_fiber_complex, degree_points, face_quotient, fourier_indices, star_cocycle, twisted_add,
    HomogenizedFunction, TwistedMonoidElement,
};
use tropav_core::paving::PeriodicPaving;
use tropav_core::pwl::{
    bending_parameters, cone_cy_membership, is_convex, is_p_convex, legendre_transform, quasiperiodic_decompose,
    sigma_section, AffinePiece, PwAffineFunction, ToricMonoid,
};
use tropav_core::siegel::{cayley_transform, gamma_action, tropicalize, ComplexMatrixJson, CuspSpec, SiegelPoint};
use tropav_core::theta::{
    balanced_sections, default_twist_symmetric, degen_exponents, enumerate_balanced_set, heisenberg_relation_check,
    kw_decompose, kw_permutation_check, power_map_kernel_check, schrodinger_action, section_valuation_profile,
    twist_data, CyclotomicInteger, DegenerationData, HeisenbergElement, HeisenbergGroup, SchrodingerVector,
    DEFAULT_ENUMERATION_BOUND,
};

use crate::{at, parse, Command, Failure, Options};

type Out = Result<Value, Failure>;

pub(crate) fn dispatch(cmd: &Command, input: Value, opts: &Options) -> Out {
    use Command::*;
    let matrix_input = |v: Value| if v.is_array() { json!({ "matrix": v }) } else { v };
    match cmd {
        Hnf(_) => hnf(matrix_input(input)),
        Snf(_) => snf(matrix_input(input)),
        Symplectic(_) => symplectic(matrix_input(input)),
        Poltype(_) => poltype(matrix_input(input)),
        Glxy(_) => glxy(input),
        Delaunay(_) => delaunay(input, opts),
        VoronoiCone(_) => voronoi_cone(input),
        Bend(_) => bend(input),
        QpDecompose(_) => qp_decompose(input),
        CyCone(_) => cy_cone(input),
        Sigma(_) => sigma(input, opts),
        Legendre(_) => legendre(input, opts),
        MonoidAdd(_) => monoid_add(input, opts),
        Fourier(_) => fourier(input),
        Fiber(_) => fiber(input),
        Face(_) => face(input),
        Gamma(_) => gamma(input, opts),
        Cayley(_) => cayley(input, opts),
        Trop(_) => trop(input, opts),
        Heis(_) => heis(input),
        Kw(_) => kw(input),
        Balanced(_) => balanced(input),
        Degen(_) => degen(input),
        Twist(_) => twist(input),
        Profile(_) => profile(input, opts),
    }
}

fn doc(kind: &str, body: impl Serialize) -> Value {
    let mut v = serde_json::to_value(body).expect("outputs serialize");
    if let Value::Object(m) = &mut v {
        m.insert("kind".into(), Value::String(kind.into()));
    }
    v
}

fn ints(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn missing(field: &str) -> Failure {
    Failure::malformed("MalformedInput", format!("missing field `{field}`"), Some(field))
}

// ----------------------------------------------------------------------------
// shared input views

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixIn {
    matrix: IntegerMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionIn {
    payload_rank: usize,
    paving: PeriodicPaving,
    pieces: Vec<AffinePiece>,
    increments: Vec<AffinePiece>,
    #[serde(default)]
    rank: Option<usize>,
}

impl FunctionIn {
    fn build(self, field: &'static str) -> Result<PwAffineFunction, Failure> {
        let rank = self.paving.rank();
        if self.rank.is_some_and(|r| r != rank) {
            return Err(Failure::malformed("MalformedInput", "rank disagrees with the paving", Some(field)));
        }
        PwAffineFunction::new(self.paving, self.payload_rank, self.pieces, self.increments).map_err(at(field))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Sample {
    #[serde(with = "arith::int_vec_num")]
    point: IVec,
    #[serde(with = "arith::rat_str")]
    value: Rat,
}

fn samples(v: Vec<Sample>) -> BTreeMap<IVec, Rat> {
    v.into_iter().map(|s| (s.point, s.value)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionIn {
    delta: Vec<u64>,
    modulus: i64,
    entries: Vec<EntryIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryIn {
    x: Vec<i64>,
    exponents: Vec<u64>,
}

fn group(delta: Vec<u64>, modulus: i64) -> Result<HeisenbergGroup, Failure> {
    let t = PolarizationType::new(delta).map_err(at("delta"))?;
    HeisenbergGroup::new(t, modulus).map_err(at("modulus"))
}

impl SectionIn {
    fn build(self, field: &'static str) -> Result<SchrodingerVector, Failure> {
        let grp = group(self.delta, self.modulus)?;
        let m = grp.modulus() as usize;
        let mut coeffs = vec![CyclotomicInteger::zero(m); grp.degree()];
        for e in self.entries {
            if e.x.len() != grp.rank() {
                return Err(Failure::malformed("MalformedInput", "point has the wrong length", Some(field)));
            }
            let i = grp.index_of(&e.x);
            coeffs[i] = coeffs[i].add(&CyclotomicInteger::from_exponents(m, &e.exponents));
        }
        SchrodingerVector::from_coeffs(&grp, coeffs).map_err(at(field))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidIn {
    ambient_rank: usize,
    functionals: Vec<Vec<arith::IntNum>>,
}

impl MonoidIn {
    fn build(self, field: &'static str) -> Result<ToricMonoid, Failure> {
        let fl = self.functionals.into_iter().map(|l| l.into_iter().map(|x| x.0).collect()).collect();
        ToricMonoid::new(self.ambient_rank, fl).map_err(at(field))
    }
}

fn form(q: RationalMatrix) -> Result<QuadraticForm, Failure> {
    QuadraticForm::new(q).map_err(at("q"))
}

// ----------------------------------------------------------------------------
// exact linear algebra

fn hnf(v: Value) -> Out {
    let i: MatrixIn = parse(v)?;
    let (h, u) = hermite_normal_form(&i.matrix);
    Ok(json!({"kind": "hnf", "h": h, "u": u}))
}

#[derive(Serialize)]
struct SnfOut {
    #[serde(with = "arith::int_vec_num")]
    d: IVec,
    u: IntegerMatrix,
    v: IntegerMatrix,
}

fn snf(v: Value) -> Out {
    let i: MatrixIn = parse(v)?;
    let (d, u, v) = smith_normal_form(&i.matrix);
    Ok(doc("snf", SnfOut { d, u, v }))
}

fn symplectic(v: Value) -> Out {
    let i: MatrixIn = parse(v)?;
    let s = symplectic_normal_form(&i.matrix).map_err(at("matrix"))?;
    Ok(doc("symplectic", s))
}

fn poltype(v: Value) -> Out {
    let i: MatrixIn = parse(v)?;
    let t = polarization_type(&i.matrix).map_err(at("matrix"))?;
    Ok(json!({"kind": "poltype", "type": t}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GlxyIn {
    u: IntegerMatrix,
    q: RationalMatrix,
    y_basis: IntegerMatrix,
}

fn glxy(v: Value) -> Out {
    let i: GlxyIn = parse(v)?;
    let q = glxy_act(&i.u, &i.q, &i.y_basis).map_err(at("u"))?;
    Ok(json!({"kind": "glxy", "q": q}))
}

// ----------------------------------------------------------------------------
// pavings and piecewise-affine functions

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormIn {
    q: RationalMatrix,
    #[serde(default)]
    period_basis: Option<IntegerMatrix>,
}

impl FormIn {
    fn basis(&self) -> IntegerMatrix {
        self.period_basis.clone().unwrap_or_else(|| IntegerMatrix::identity(self.q.rows()))
    }
}

fn delaunay(v: Value, opts: &Options) -> Out {
    let i: FormIn = parse(v)?;
    let basis = i.basis();
    let paving = delaunay_subdivision(&form(i.q)?, &basis, opts.window).map_err(at("q"))?;
    Ok(json!({"kind": "paving", "orbits": paving.cells().len(), "paving": paving}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeIn {
    paving: PeriodicPaving,
    q: RationalMatrix,
}

fn voronoi_cone(v: Value) -> Out {
    let i: ConeIn = parse(v)?;
    let contains = voronoi_cone_contains(&i.paving, &form(i.q)?).map_err(at("paving"))?;
    Ok(json!({"kind": "voronoi-cone", "contains": contains}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BendIn {
    function: FunctionIn,
    #[serde(default)]
    monoid: Option<MonoidIn>,
    #[serde(default)]
    strict: bool,
}

#[derive(Serialize)]
struct BentWall {
    wall: tropav_core::paving::Wall,
    #[serde(with = "arith::rat_vec")]
    bending: Vec<Rat>,
}

fn bend(v: Value) -> Out {
    let i: BendIn = parse(v)?;
    let f = i.function.build("function")?;
    let walls: Vec<BentWall> = bending_parameters(&f)
        .map_err(at("function"))?
        .into_iter()
        .map(|(wall, bending)| BentWall { wall, bending })
        .collect();
    let convex = is_convex(&f).map_err(at("function"))?;
    let mut out = json!({"kind": "bending", "walls": walls, "convex": convex});
    if let Some(p) = i.monoid {
        let p = p.build("monoid")?;
        out["p_convex"] = json!(is_p_convex(&f, &p, i.strict).map_err(at("monoid"))?);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QpIn {
    samples: Vec<Sample>,
    period_basis: IntegerMatrix,
}

fn qp_decompose(v: Value) -> Out {
    let i: QpIn = parse(v)?;
    let d = quasiperiodic_decompose(&samples(i.samples), &i.period_basis).map_err(at("samples"))?;
    Ok(json!({"kind": "qp-decomposition", "decomposition": d}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CyIn {
    psi: Vec<Sample>,
    paving: PeriodicPaving,
    period_basis: IntegerMatrix,
}

fn cy_cone(v: Value) -> Out {
    let i: CyIn = parse(v)?;
    let member = cone_cy_membership(&samples(i.psi), &i.paving, &i.period_basis).map_err(at("psi"))?;
    Ok(json!({"kind": "cy-cone", "member": member}))
}

fn sigma(v: Value, opts: &Options) -> Out {
    let i: FormIn = parse(v)?;
    let basis = i.basis();
    let f = sigma_section(&form(i.q)?, &basis, opts.window).map_err(at("q"))?;
    Ok(json!({"kind": "function", "function": f}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionOnly {
    function: FunctionIn,
}

#[derive(Serialize)]
struct PointValue {
    #[serde(with = "arith::int_vec_num")]
    point: IVec,
    #[serde(with = "arith::rat_str")]
    value: Rat,
}

fn legendre(v: Value, opts: &Options) -> Out {
    let i: FunctionOnly = parse(v)?;
    let f = i.function.build("function")?;
    let values: Vec<PointValue> = legendre_transform(&f, opts.window)
        .map_err(at("function"))?
        .into_iter()
        .map(|(point, value)| PointValue { point, value })
        .collect();
    Ok(json!({"kind": "legendre", "values": values}))
}

// ----------------------------------------------------------------------------
// monoids and central fibers

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidAddIn {
    function: FunctionIn,
    x: TwistedMonoidElement,
    y: TwistedMonoidElement,
    #[serde(default)]
    monoid: Option<MonoidIn>,
}

fn monoid_add(v: Value, opts: &Options) -> Out {
    let i: MonoidAddIn = parse(v)?;
    let phi = HomogenizedFunction::new(i.function.build("function")?);
    let sum = twisted_add(&i.x, &i.y, &phi).map_err(at("x"))?;
    let cocycle = star_cocycle(&i.x.degree_point(), &i.y.degree_point(), &phi).map_err(at("x"))?;
    let mut out = json!({
        "kind": "monoid-add",
        "sum": sum,
        "cocycle": cocycle.iter().map(arith::fmt_rat).collect::<Vec<_>>(),
    });
    if let Some(p) = i.monoid {
        let p = p.build("monoid")?;
        let pts = degree_points(phi.rank(), opts.degree_bound, opts.window as i64);
        let mut all_in = true;
        'outer: for a in &pts {
            for b in &pts {
                if !p.contains(&star_cocycle(a, b, &phi).map_err(at("function"))?) {
                    all_in = false;
                    break 'outer;
                }
            }
        }
        out["cocycles_in_monoid"] = json!(all_in);
        out["p_convex"] = json!(is_p_convex(phi.base(), &p, false).map_err(at("monoid"))?);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierIn {
    x_rank: usize,
    phi_map: IntegerMatrix,
}

fn fourier(v: Value) -> Out {
    let i: FourierIn = parse(v)?;
    let (reps, t) = fourier_indices(i.x_rank, &i.phi_map).map_err(at("phi_map"))?;
    let reps: Vec<Vec<arith::IntNum>> = reps.into_iter().map(|r| r.into_iter().map(arith::IntNum).collect()).collect();
    Ok(json!({"kind": "fourier", "reps": reps, "type": t}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberIn {
    paving: PeriodicPaving,
    phi_image_basis: IntegerMatrix,
}

fn fiber(v: Value) -> Out {
    let i: FiberIn = parse(v)?;
    let c = central_fiber_complex(&i.paving, &i.phi_image_basis).map_err(at("paving"))?;
    Ok(json!({
        "kind": "central-fiber",
        "adjacency": c.adjacency(),
        "cycle": c.is_cycle(),
        "components": c.components,
        "incidences": c.incidences,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceIn {
    monoid: MonoidIn,
    face_functionals: Vec<Vec<arith::IntStr>>,
    function: FunctionIn,
}

fn face(v: Value) -> Out {
    let i: FaceIn = parse(v)?;
    let f = i.function.build("function")?;
    let fl: Vec<IVec> = i.face_functionals.into_iter().map(|l| l.into_iter().map(|x| x.0).collect()).collect();
    let data = face_quotient(&i.monoid.build("monoid")?, &fl, &f).map_err(at("face_functionals"))?;
    Ok(doc("face-quotient", data))
}

// ----------------------------------------------------------------------------
// Siegel space

fn point(m: ComplexMatrixJson, opts: &Options) -> Result<SiegelPoint, Failure> {
    let m = m.to_matrix().map_err(at("tau"))?;
    SiegelPoint::new(m, opts.tol).map_err(at("tau"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaIn {
    r: IntegerMatrix,
    tau: ComplexMatrixJson,
    delta: Vec<u64>,
}

fn gamma(v: Value, opts: &Options) -> Out {
    let i: GammaIn = parse(v)?;
    let tau = point(i.tau, opts)?;
    let delta = PolarizationType::new(i.delta).map_err(at("delta"))?;
    let out = gamma_action(&i.r, &tau, &delta, opts.tol).map_err(at("r"))?;
    Ok(json!({"kind": "siegel-point", "tau": out}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TauIn {
    tau: ComplexMatrixJson,
}

fn cayley(v: Value, opts: &Options) -> Out {
    let i: TauIn = parse(v)?;
    let tau = point(i.tau, opts)?;
    let w = cayley_transform(&tau, opts.tol).map_err(at("tau"))?;
    Ok(json!({"kind": "cayley", "value": ComplexMatrixJson::from_matrix(&w)}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TropIn {
    tau: ComplexMatrixJson,
    g_prime: usize,
    #[serde(default)]
    delta: Option<Vec<u64>>,
}

fn trop(v: Value, opts: &Options) -> Out {
    let i: TropIn = parse(v)?;
    let tau = point(i.tau, opts)?;
    let delta = match i.delta {
        Some(d) => PolarizationType::new(d).map_err(at("delta"))?,
        None => PolarizationType::principal(tau.g()),
    };
    let m = tropicalize(&tau, &CuspSpec { g_prime: i.g_prime, delta }, opts.tol).map_err(at("g_prime"))?;
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect();
    Ok(json!({"kind": "tropicalization", "matrix": rows}))
}

// ----------------------------------------------------------------------------
// Heisenberg groups and theta sections

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeisIn {
    delta: Vec<u64>,
    modulus: i64,
    #[serde(default = "default_op")]
    op: String,
    #[serde(default)]
    x: Option<HeisenbergElement>,
    #[serde(default)]
    y: Option<HeisenbergElement>,
    #[serde(default)]
    power: Option<u64>,
    #[serde(default)]
    vector: Option<SectionIn>,
}

fn default_op() -> String {
    "mul".into()
}

fn heis(v: Value) -> Out {
    let i: HeisIn = parse(v)?;
    let grp = group(i.delta.clone(), i.modulus)?;
    let x = || i.x.clone().ok_or_else(|| missing("x"));
    let y = || i.y.clone().ok_or_else(|| missing("y"));
    let element = |e: HeisenbergElement| json!({"kind": "heis-element", "element": e});
    match i.op.as_str() {
        "mul" => Ok(element(grp.mul(&x()?, &y()?).map_err(at("x"))?)),
        "inverse" => Ok(element(grp.inverse(&x()?).map_err(at("x"))?)),
        "commutator" => Ok(element(grp.commutator(&x()?, &y()?).map_err(at("x"))?)),
        "power" => {
            let n = i.power.ok_or_else(|| missing("power"))?;
            Ok(element(grp.pow(&x()?, n).map_err(at("x"))?))
        }
        "power-check" => {
            let rep = power_map_kernel_check(grp.delta(), grp.modulus()).map_err(at("delta"))?;
            Ok(doc("power-map", rep))
        }
        "act" => {
            let vec = i.vector.ok_or_else(|| missing("vector"))?.build("vector")?;
            if vec.group() != grp {
                return Err(Failure::malformed("MalformedInput", "vector lives in another group", Some("vector")));
            }
            let out = schrodinger_action(&x()?, &vec).map_err(at("x"))?;
            Ok(json!({"kind": "section", "section": out}))
        }
        other => Err(Failure::malformed("MalformedInput", format!("unknown op `{other}`"), Some("op"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KwIn {
    delta: Vec<u64>,
    modulus: i64,
    #[serde(default)]
    checks: bool,
}

fn kw(v: Value) -> Out {
    let i: KwIn = parse(v)?;
    let grp = group(i.delta, i.modulus)?;
    let spaces = kw_decompose(grp.delta(), grp.modulus()).map_err(at("delta"))?;
    let mut out = json!({"kind": "kw", "eigenspaces": spaces});
    if i.checks {
        out["permutation_check"] = json!(kw_permutation_check(grp.delta(), grp.modulus()).map_err(at("delta"))?);
        out["relation_check"] = json!(heisenberg_relation_check(grp.delta(), grp.modulus()).map_err(at("delta"))?);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftIn {
    character: Vec<i64>,
    lift: HeisenbergElement,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BalancedIn {
    delta: Vec<u64>,
    modulus: i64,
    #[serde(default)]
    theta0: Option<Vec<i64>>,
    #[serde(default)]
    lifts: Option<Vec<LiftIn>>,
    #[serde(default)]
    enumerate: bool,
    #[serde(default)]
    bound: Option<usize>,
}

fn balanced(v: Value) -> Out {
    let i: BalancedIn = parse(v)?;
    let grp = group(i.delta, i.modulus)?;
    if i.enumerate {
        let bound = i.bound.unwrap_or(DEFAULT_ENUMERATION_BOUND);
        let all = enumerate_balanced_set(grp.delta(), grp.modulus(), bound).map_err(at("delta"))?;
        return Ok(json!({"kind": "balanced-set", "count": all.len(), "sections": all}));
    }
    let theta0 = i.theta0.ok_or_else(|| missing("theta0"))?;
    let lifts: Vec<(Vec<i64>, HeisenbergElement)> =
        i.lifts.ok_or_else(|| missing("lifts"))?.into_iter().map(|l| (l.character, l.lift)).collect();
    let s = balanced_sections(grp.delta(), grp.modulus(), &theta0, &lifts).map_err(at("lifts"))?;
    Ok(json!({"kind": "section", "section": s}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DegenIn {
    quadratic: RationalMatrix,
    #[serde(default)]
    phi_check: Option<IntegerMatrix>,
    polarization: Vec<u64>,
    #[serde(default)]
    twist_skew: Option<IntegerMatrix>,
    #[serde(default)]
    twist_symmetric: Option<IntegerMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentIn {
    data: DegenIn,
    lambda: Vec<i64>,
    alpha: Vec<i64>,
}

impl DegenIn {
    fn build(self, need_phi_check: bool) -> Result<DegenerationData, Failure> {
        let g = self.quadratic.rows();
        let phi_check = match self.phi_check {
            Some(m) => m,
            None if need_phi_check => return Err(missing("data.phi_check")),
            None => IntegerMatrix::zeros(g, g),
        };
        let skew = self.twist_skew.unwrap_or_else(|| IntegerMatrix::zeros(g, g));
        let symmetric = self.twist_symmetric.unwrap_or_else(|| default_twist_symmetric(&skew));
        Ok(DegenerationData {
            quadratic: self.quadratic,
            phi_check,
            polarization: PolarizationType::new(self.polarization).map_err(at("data.polarization"))?,
            twist_skew: skew,
            twist_symmetric: symmetric,
        })
    }
}

fn degen(v: Value) -> Out {
    let i: ExponentIn = parse(v)?;
    let data = i.data.build(true)?;
    let e = degen_exponents(&data, &ints(&i.lambda), &ints(&i.alpha)).map_err(at("data"))?;
    Ok(doc("degen", e))
}

fn twist(v: Value) -> Out {
    let i: ExponentIn = parse(v)?;
    let data = i.data.build(false)?;
    let t = twist_data(&data, &ints(&i.lambda), &ints(&i.alpha)).map_err(at("data"))?;
    Ok(doc("twist", t))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileIn {
    section: SectionIn,
    function: FunctionIn,
    phi_map: IntegerMatrix,
}

fn profile(v: Value, opts: &Options) -> Out {
    let i: ProfileIn = parse(v)?;
    let s = i.section.build("section")?;
    let f = i.function.build("function")?;
    let entries = section_valuation_profile(&s, &f, &i.phi_map, opts.window).map_err(at("section"))?;
    let exponents: Vec<String> = entries.iter().map(|e| arith::fmt_rat(&e.exponent)).collect();
    Ok(json!({"kind": "profile", "exponents": exponents, "entries": entries}))
}
