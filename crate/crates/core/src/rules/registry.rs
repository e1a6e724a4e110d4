//! The built-in rule set: the axioms with their notational companions, and
//! the derived lemmas used by the normal-form construction.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::build::*;
use super::{ParamDecl, ParamKind, RewriteRule, RuleParams, Tier};
use crate::diagram::{Diagram, DiagramBuilder, Dimension, Endpoint, GeneratorKind, PhaseVector};
use crate::error::{Result, ZxwError};
use crate::normal_form::{
    build_spine, emit_diagram, generator_nf, partial_trace_nf, tensor_nf, Branch, NormalForm,
};

const AX: Tier = Tier::Axiom;
const LEM: Tier = Tier::DerivedLemma;

type P = RuleParams;

fn phases(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::Phases,
    }
}

fn nonzero_phases(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::NonZeroPhases,
    }
}

fn scalar_p(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::Scalar,
    }
}

fn nonzero_scalar(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::NonZeroScalar,
    }
}

fn int(name: &'static str, lo: fn(Dimension) -> i64, hi: fn(Dimension) -> i64) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::Int { lo, hi },
    }
}

fn amplitudes(name: &'static str, wires: usize) -> ParamDecl {
    ParamDecl {
        name,
        kind: ParamKind::Amplitudes { wires },
    }
}

fn top(d: Dimension) -> i64 {
    d.get() as i64 - 1
}

/// Any residue `0..d`.
fn residue(name: &'static str) -> ParamDecl {
    int(name, |_| 0, top)
}

/// A nonzero residue `1..d`.
fn nonzero_residue(name: &'static str) -> ParamDecl {
    int(name, |_| 1, top)
}

fn variant(count: fn(Dimension) -> i64) -> ParamDecl {
    int("variant", |_| 0, count)
}

fn rule(
    name: &str,
    tier: Tier,
    summary: &str,
    params: Vec<ParamDecl>,
    lhs: fn(Dimension, &P) -> Result<Diagram>,
    rhs: fn(Dimension, &P) -> Result<Diagram>,
) -> RewriteRule {
    RewriteRule::new(name, tier, summary, params, lhs, rhs)
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn sqrt_d(d: Dimension) -> f64 {
    (d.get() as f64).sqrt()
}

/// Angles of the green spider whose phases are the Fourier row `K_j`.
fn fourier_angles(d: Dimension, j: i64) -> Vec<f64> {
    (1..d.get() as i64)
        .map(|k| TAU * (d.reduce(j * k) as f64) / d.get() as f64)
        .collect()
}

/// Every rule, axioms first, then lemmas by number.
pub fn builtin_rules() -> Vec<RewriteRule> {
    let mut rules = axioms();
    rules.extend(lemmas());
    rules
}

fn axioms() -> Vec<RewriteRule> {
    vec![
        rule(
            "S1",
            AX,
            "Z boxes joined by a wire fuse, multiplying their phases",
            vec![phases("a"), phases("b"), int("k", |_| 0, |_| 2)],
            |d, p| seq(&[z(d, &p.phases(0)?, 1, 2)?, par(d, &[z(d, &p.phases(1)?, 1, p.count(2)?)?, id(d, 1)?])?]),
            |d, p| z(d, &p.phases(0)?.product(&p.phases(1)?), 1, p.count(2)? + 1),
        ),
        rule("S2", AX, "a plain one-in one-out spider is the identity", vec![], |d, _| spider(d, 1, 1), |d, _| id(d, 1)),
        rule(
            "S3",
            AX,
            "snake: a spider cap followed by a spider cup straightens",
            vec![],
            |d, _| seq(&[par(d, &[spider(d, 0, 2)?, id(d, 1)?])?, par(d, &[id(d, 1)?, spider(d, 2, 0)?])?]),
            |d, _| id(d, 1),
        ),
        rule(
            "S4",
            AX,
            "legs of a Z box can be bent with a cap",
            vec![phases("a")],
            |d, p| seq(&[par(d, &[spider(d, 0, 2)?, id(d, 1)?])?, par(d, &[id(d, 1)?, z(d, &p.phases(0)?, 2, 0)?])?]),
            |d, p| z(d, &p.phases(0)?, 1, 1),
        ),
        rule(
            "B1",
            AX,
            "a plain spider copies the pink state K_j",
            vec![residue("j"), int("m", |_| 0, |_| 3)],
            |d, p| seq(&[pink(d, p.int(0)?, 0, 1)?, spider(d, 1, p.count(1)?)?]),
            |d, p| repeat(d, &pink(d, p.int(0)?, 0, 1)?, p.count(1)?),
        ),
        rule(
            "B2",
            AX,
            "bialgebra between the plain spider and the pink spider",
            vec![],
            |d, _| seq(&[pink(d, 0, 2, 1)?, spider(d, 1, 2)?]),
            |d, _| {
                seq(&[
                    par(d, &[spider(d, 1, 2)?, spider(d, 1, 2)?])?,
                    perm(d, &[0, 2, 1, 3])?,
                    par(d, &[pink(d, 0, 2, 1)?, pink(d, 0, 2, 1)?])?,
                ])
            },
        ),
        rule(
            "K0",
            AX,
            "the pink effect K_j copies through a plain spider",
            vec![residue("j")],
            |d, p| seq(&[spider(d, 2, 1)?, pink(d, p.int(0)?, 1, 0)?]),
            |d, p| par(d, &[pink(d, p.int(0)?, 1, 0)?, pink(d, p.int(0)?, 1, 0)?]),
        ),
        rule(
            "K1",
            AX,
            "a Z box passes through the pink shift K_j, picking up the scalar a_{-j}",
            vec![nonzero_phases("a"), residue("j")],
            |d, p| seq(&[pink(d, p.int(1)?, 1, 1)?, z(d, &p.phases(0)?, 1, 1)?]),
            |d, p| {
                let (a, j) = (p.phases(0)?, p.int(1)?);
                let pivot = a.get(-j);
                let shifted = PhaseVector::new((1..d.get() as i64).map(|x| a.get(x - j) / pivot).collect());
                par(d, &[seq(&[z(d, &shifted, 1, 1)?, pink(d, j, 1, 1)?])?, scalar(d, pivot)?])
            },
        ),
        rule(
            "P1",
            AX,
            "the phase K_j of a pink spider splits off as the state K_j",
            vec![residue("j"), int("m", |_| 1, |_| 2)],
            |d, p| pink(d, p.int(0)?, 1, p.count(1)?),
            |d, p| seq(&[par(d, &[id(d, 1)?, pink(d, p.int(0)?, 0, 1)?])?, pink(d, 0, 2, p.count(1)?)?]),
        ),
        rule(
            "AD",
            AX,
            "two Z states merged by a transposed W node add their phase vectors",
            vec![phases("a"), phases("b"), int("m", |_| 1, |_| 2)],
            |d, p| {
                seq(&[
                    par(d, &[z(d, &p.phases(0)?, 0, 1)?, z(d, &p.phases(1)?, 0, 1)?])?,
                    wt(d, 2)?,
                    spider(d, 1, p.count(2)?)?,
                ])
            },
            |d, p| z(d, &p.phases(0)?.sum(&p.phases(1)?), 0, p.count(2)?),
        ),
        rule(
            "Zer",
            AX,
            "on the state |0⟩ every Z box acts as a plain spider",
            vec![phases("a"), int("m", |_| 0, |_| 2)],
            |d, p| seq(&[z(d, &PhaseVector::zeros(d), 0, 1)?, z(d, &p.phases(0)?, 1, p.count(1)?)?]),
            |d, p| seq(&[z(d, &PhaseVector::zeros(d), 0, 1)?, spider(d, 1, p.count(1)?)?]),
        ),
        rule(
            "Ept",
            AX,
            "the state |0⟩ against the plain effect is the empty diagram",
            vec![],
            |d, _| seq(&[z(d, &PhaseVector::zeros(d), 0, 1)?, spider(d, 1, 0)?]),
            empty_side,
        ),
        rule(
            "Hopf",
            AX,
            "a plain spider and a pink spider joined by d parallel wires disconnect",
            vec![],
            |d, _| seq(&[spider(d, 1, d.get())?, pink(d, 0, d.get(), 1)?]),
            |d, _| par(d, &[spider(d, 1, 0)?, pink(d, 0, 0, 1)?]),
        ),
        rule("Hdag", AX, "H† is three Hadamard boxes in a row", vec![], |d, _| hd(d), |d, _| seq(&[h(d)?, h(d)?, h(d)?])),
        rule(
            "HZ",
            AX,
            "pink spider as a Z box with Fourier phases, Hadamards on outputs and H† on inputs",
            vec![residue("j"), int("n", |_| 0, |_| 2), int("m", |_| 0, |_| 2)],
            |d, p| pink(d, p.int(0)?, p.count(1)?, p.count(2)?),
            |d, p| {
                let (j, n, m) = (p.int(0)?, p.count(1)?, p.count(2)?);
                let core = z(d, &PhaseVector::fourier(d, j), n, m)?;
                let body = seq(&[repeat(d, &hd(d)?, n)?, core, repeat(d, &h(d)?, m)?])?;
                let u = sqrt_d(d).powi(n as i32 + m as i32 - 2);
                par(d, &[body, scalar(d, c(u))?])
            },
        ),
        rule(
            "HX",
            AX,
            "pink spider with H† on outputs and Hadamards on inputs, conjugate Fourier phases",
            vec![residue("j"), int("n", |_| 0, |_| 2), int("m", |_| 0, |_| 2)],
            |d, p| pink(d, p.int(0)?, p.count(1)?, p.count(2)?),
            |d, p| {
                let (j, n, m) = (p.int(0)?, p.count(1)?, p.count(2)?);
                let core = z(d, &PhaseVector::fourier(d, -j), n, m)?;
                let body = seq(&[repeat(d, &h(d)?, n)?, core, repeat(d, &hd(d)?, m)?])?;
                let u = sqrt_d(d).powi(n as i32 + m as i32 - 2);
                par(d, &[body, scalar(d, c(u))?])
            },
        ),
        rule(
            "Du",
            AX,
            "the dualiser is a pink cap bent into a plain cup",
            vec![],
            |d, _| dual(d),
            |d, _| seq(&[par(d, &[pink(d, 0, 0, 2)?, id(d, 1)?])?, par(d, &[id(d, 1)?, spider(d, 2, 0)?])?]),
        ),
        rule(
            "Mu",
            AX,
            "a multiplier of weight w is w parallel wires from a plain spider to a pink spider",
            vec![residue("w")],
            |d, p| mult(d, p.int(0)?),
            |d, p| {
                let w = p.count(0)?;
                seq(&[spider(d, 1, w)?, pink(d, 0, w, 1)?])
            },
        ),
        rule(
            "WN",
            AX,
            "an n-legged W node is a tree of binary W nodes",
            vec![int("n", |_| 1, |_| 4)],
            |d, p| wk(d, p.count(0)?),
            |d, p| w_chain(d, p.count(0)?),
        ),
        rule(
            "YT",
            AX,
            "the triangle (variant 0) and its inverse (variant 1) are a W node with one branch capped",
            vec![variant(|_| 1)],
            |d, p| if p.int(0)? == 0 { tri(d) } else { tri_inv(d) },
            |d, p| {
                let cap = if p.int(0)? == 0 { spider(d, 1, 0)? } else { z_const(d, c(-1.0), 1, 0)? };
                seq(&[w(d)?, par(d, &[cap, id(d, 1)?])?])
            },
        ),
        rule(
            "WW",
            AX,
            "bialgebra of the W node with its transpose on inputs coming from a W node",
            vec![],
            |d, _| seq(&[w(d)?, wt(d, 2)?, w(d)?]),
            |d, _| {
                seq(&[w(d)?, par(d, &[w(d)?, w(d)?])?, perm(d, &[0, 2, 1, 3])?, par(d, &[wt(d, 2)?, wt(d, 2)?])?])
            },
        ),
        rule(
            "BZW",
            AX,
            "bialgebra between the plain spider and the transposed W node",
            vec![],
            |d, _| seq(&[wt(d, 2)?, spider(d, 1, 2)?]),
            |d, _| {
                seq(&[
                    par(d, &[spider(d, 1, 2)?, spider(d, 1, 2)?])?,
                    perm(d, &[0, 2, 1, 3])?,
                    par(d, &[wt(d, 2)?, wt(d, 2)?])?,
                ])
            },
        ),
        rule(
            "Bs0",
            AX,
            "the W node copies |0⟩",
            vec![],
            |d, _| seq(&[ket(d, 0)?, w(d)?]),
            |d, _| par(d, &[ket(d, 0)?, ket(d, 0)?]),
        ),
        rule(
            "Bsj",
            AX,
            "⟨j| after a transposed W node fed the plain state is the Z effect T_j",
            vec![nonzero_residue("j")],
            |d, p| seq(&[par(d, &[spider(d, 0, 1)?, id(d, 1)?])?, wt(d, 2)?, bra(d, p.int(0)?)?]),
            |d, p| z(d, &PhaseVector::unit(d, p.count(0)?), 1, 0),
        ),
        rule(
            "TA",
            AX,
            "trialgebra: behind a common W node a pink sum equals a transposed W node",
            vec![],
            |d, _| trialgebra(d, 2, &[Merge::Pink]),
            |d, _| trialgebra(d, 2, &[Merge::W]),
        ),
        rule(
            "KZ",
            AX,
            "⟨d-1| ⊗ ⟨0|^n splits into a transposed W node and a weighted pink constraint",
            vec![int("n", |_| 1, |_| 2), nonzero_residue("e1"), nonzero_residue("e2")],
            |d, p| par(d, &[bra(d, top(d))?, repeat(d, &bra(d, 0)?, p.count(0)?)?]),
            kz_rhs,
        ),
        rule(
            "HD",
            AX,
            "the Hadamard box decomposes into Z boxes holding the rows of the Fourier matrix",
            vec![],
            |d, _| h(d),
            |d, _| {
                let state = emit_diagram(&generator_nf(&GeneratorKind::Hadamard, d)?);
                seq(&[par(d, &[state, id(d, 1)?])?, par(d, &[id(d, 1)?, spider(d, 2, 0)?])?])
            },
        ),
        rule(
            "VA",
            AX,
            "d-1 labelled states (0,…,0,a_k) combine through a V box into one Z state",
            vec![phases("a")],
            |d, p| {
                let a = p.phases(0)?;
                let states: Vec<Diagram> =
                    a.entries().iter().map(|x| labeled(d, *x, 0, 1)).collect::<Result<_>>()?;
                seq(&[par(d, &states)?, vbox(d)?])
            },
            |d, p| z(d, &p.phases(0)?, 0, 1),
        ),
        rule(
            "VW",
            AX,
            "a transposed W node after two V boxes is a V box after a row of transposed W nodes",
            vec![],
            |d, _| seq(&[par(d, &[vbox(d)?, vbox(d)?])?, wt(d, 2)?]),
            vw_rhs,
        ),
        rule(
            "ZV",
            AX,
            "a labelled state copied by W_{d-1} into a V box is the constant Z state",
            vec![scalar_p("x")],
            |d, p| seq(&[labeled(d, p.scalar(0)?, 0, 1)?, wk(d, d.get() - 1)?, vbox(d)?]),
            |d, p| z_const(d, p.scalar(0)?, 0, 1),
        ),
    ]
}

fn empty_side(d: Dimension, _: &P) -> Result<Diagram> {
    empty(d)
}

#[derive(Copy, Clone, PartialEq)]
enum Merge {
    Pink,
    W,
}

/// One input split by `W_m` into `m` plain spiders. Each spider sends one
/// leg to every merge node (pink sum or transposed W, in `merges` order) and
/// one leg to the boundary. Outputs: the merges, then the spiders.
fn trialgebra(d: Dimension, m: usize, merges: &[Merge]) -> Result<Diagram> {
    let g = merges.len();
    let mut b = DiagramBuilder::new(d, 1, g + m);
    let split = b.add(GeneratorKind::w_general(m));
    b.connect(Endpoint::input(0), Endpoint::in_port(split, 0));
    let heads: Vec<_> = merges
        .iter()
        .enumerate()
        .map(|(k, kind)| {
            let node = b.add(match kind {
                Merge::Pink => GeneratorKind::pink(0, d, m, 1),
                Merge::W => GeneratorKind::w_transpose(m),
            });
            b.connect(Endpoint::out_port(node, 0), Endpoint::output(k));
            node
        })
        .collect();
    for i in 0..m {
        let s = b.add(GeneratorKind::spider(d, 1, g + 1));
        b.connect(Endpoint::out_port(split, i), Endpoint::in_port(s, 0));
        for (k, head) in heads.iter().enumerate() {
            b.connect(Endpoint::out_port(s, k), Endpoint::in_port(*head, i));
        }
        b.connect(Endpoint::out_port(s, g), Endpoint::output(g + i));
    }
    b.build()
}

/// Wire 0 feeds input 0 of a transposed W node projected onto ⟨d-1|. Wire
/// `i ≥ 1` is copied: one copy joins the W node, the other passes a
/// multiplier `e_i` into a pink effect shared by all of them.
fn kz_rhs(d: Dimension, p: &P) -> Result<Diagram> {
    let n = p.count(0)?;
    let weights = [p.int(1)?, p.int(2)?];
    let mut b = DiagramBuilder::new(d, n + 1, 0);
    let wt = b.add(GeneratorKind::w_transpose(n + 1));
    let proj = b.add(GeneratorKind::pink(top(d), d, 1, 0));
    b.connect(Endpoint::out_port(wt, 0), Endpoint::in_port(proj, 0));
    b.connect(Endpoint::input(0), Endpoint::in_port(wt, 0));
    let sum = b.add(GeneratorKind::pink(0, d, n, 0));
    for i in 1..=n {
        let copy = b.add(GeneratorKind::spider(d, 1, 2));
        let m = b.add(GeneratorKind::multiplier(weights[i - 1], d));
        b.connect(Endpoint::input(i), Endpoint::in_port(copy, 0));
        b.connect(Endpoint::out_port(copy, 0), Endpoint::in_port(wt, i));
        b.connect(Endpoint::out_port(copy, 1), Endpoint::in_port(m, 0));
        b.connect(Endpoint::out_port(m, 0), Endpoint::in_port(sum, i - 1));
    }
    b.build()
}

/// Input `k` of the first V box and input `k` of the second meet in a
/// transposed W node that feeds input `k` of a single V box.
fn vw_rhs(d: Dimension, _: &P) -> Result<Diagram> {
    let n = d.get() - 1;
    let mut b = DiagramBuilder::new(d, 2 * n, 1);
    let v = b.add(GeneratorKind::VBox);
    b.connect(Endpoint::out_port(v, 0), Endpoint::output(0));
    for k in 0..n {
        let merge = b.add(GeneratorKind::w_transpose(2));
        b.connect(Endpoint::input(k), Endpoint::in_port(merge, 0));
        b.connect(Endpoint::input(n + k), Endpoint::in_port(merge, 1));
        b.connect(Endpoint::out_port(merge, 0), Endpoint::in_port(v, k));
    }
    b.build()
}

/// Most wires whose dense state stays small at dimension `d`.
fn max_wires(d: Dimension) -> i64 {
    if d.get() <= 3 {
        3
    } else {
        2
    }
}

fn nf(d: Dimension, m: usize, amplitudes: Vec<C64>) -> Result<NormalForm> {
    if amplitudes.len() != d.pow(m) {
        return Err(ZxwError::InvalidParameters(format!(
            "{} amplitudes for {m} wires at d={d}",
            amplitudes.len()
        )));
    }
    Ok(NormalForm {
        dim: d,
        outputs: m,
        amplitudes,
    })
}

/// A plain spider cup on outputs `s < t` of a state on `m` wires.
fn cup_on(d: Dimension, m: usize, s: usize, t: usize) -> Result<Diagram> {
    let mut order: Vec<usize> = (0..m).filter(|&x| x != s && x != t).collect();
    order.extend([s, t]);
    seq(&[
        perm(d, &order)?,
        par(d, &[id(d, m - 2)?, spider(d, 2, 0)?])?,
    ])
}

/// The `k`-th pair `s < t` of `0..m`, counting lexicographically and
/// wrapping around.
fn pair(m: usize, k: usize) -> (usize, usize) {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|s| (s + 1..m).map(move |t| (s, t)))
        .collect();
    pairs[k % pairs.len()]
}

fn branch(d: Dimension, m: usize, amplitude: C64, index: i64) -> Branch {
    let index = index as usize % d.pow(m);
    Branch {
        amplitude,
        weights: crate::basis::digits(index, d.get(), m),
    }
}

fn lemmas() -> Vec<RewriteRule> {
    vec![
        rule(
            "Lemma1",
            LEM,
            "two neighbouring Z boxes of a normal form can swap places",
            vec![
                int("m", |_| 1, |_| 2),
                scalar_p("a"),
                scalar_p("b"),
                int("i", |_| 0, |d| d.pow(2) as i64 - 1),
                int("k", |_| 0, |d| d.pow(2) as i64 - 1),
            ],
            |d, p| {
                let m = p.count(0)?;
                spine(
                    d,
                    m,
                    &[
                        branch(d, m, p.scalar(1)?, p.int(3)?),
                        branch(d, m, p.scalar(2)?, p.int(4)?),
                    ],
                )
            },
            |d, p| {
                let m = p.count(0)?;
                spine(
                    d,
                    m,
                    &[
                        branch(d, m, p.scalar(2)?, p.int(4)?),
                        branch(d, m, p.scalar(1)?, p.int(3)?),
                    ],
                )
            },
        ),
        rule(
            "Lemma2",
            LEM,
            "a Z state is its own normal form",
            vec![phases("a"), int("m", |_| 1, max_wires)],
            |d, p| z(d, &p.phases(0)?, 0, p.count(1)?),
            |d, p| {
                Ok(emit_diagram(&generator_nf(
                    &GeneratorKind::z_box(p.phases(0)?, 0, p.count(1)?),
                    d,
                )?))
            },
        ),
        rule(
            "Lemma3",
            LEM,
            "the bent W node has a normal form",
            vec![],
            |d, _| Ok(w(d)?.bend_to_state()),
            |d, _| Ok(emit_diagram(&generator_nf(&GeneratorKind::WNode, d)?)),
        ),
        rule(
            "Lemma4",
            LEM,
            "the bent Hadamard box has a normal form",
            vec![],
            |d, _| Ok(h(d)?.bend_to_state()),
            |d, _| Ok(emit_diagram(&generator_nf(&GeneratorKind::Hadamard, d)?)),
        ),
        rule(
            "Lemma5",
            LEM,
            "a cup on two outputs of a normal form gives the normal form of the partial trace",
            vec![
                int("m", |_| 2, max_wires),
                amplitudes("v", 0),
                int("pair", |_| 0, |_| 2),
            ],
            |d, p| {
                let m = p.count(0)?;
                let (s, t) = pair(m, p.count(2)?);
                seq(&[
                    emit_diagram(&nf(d, m, p.amplitudes(1)?)?),
                    cup_on(d, m, s, t)?,
                ])
            },
            |d, p| {
                let m = p.count(0)?;
                let (s, t) = pair(m, p.count(2)?);
                Ok(emit_diagram(&partial_trace_nf(
                    &nf(d, m, p.amplitudes(1)?)?,
                    s,
                    t,
                )?))
            },
        ),
        rule(
            "Lemma6",
            LEM,
            "two normal forms side by side merge into the normal form of the tensor product",
            vec![
                int("m", |_| 1, |d| max_wires(d) - 1),
                amplitudes("v", 0),
                int("k", |_| 1, |d| max_wires(d) - 1),
                amplitudes("w", 2),
            ],
            |d, p| {
                let a = emit_diagram(&nf(d, p.count(0)?, p.amplitudes(1)?)?);
                let b = emit_diagram(&nf(d, p.count(2)?, p.amplitudes(3)?)?);
                par(d, &[a, b])
            },
            |d, p| {
                let a = nf(d, p.count(0)?, p.amplitudes(1)?)?;
                let b = nf(d, p.count(2)?, p.amplitudes(3)?)?;
                Ok(emit_diagram(&tensor_nf(&a, &b)?))
            },
        ),
        rule(
            "Lemma7",
            LEM,
            "the pink effect K_j on a Z state reads off the scalar a_j",
            vec![phases("a"), nonzero_residue("j")],
            |d, p| seq(&[z(d, &p.phases(0)?, 0, 1)?, pink(d, p.int(1)?, 1, 0)?]),
            |d, p| labeled(d, p.phases(0)?.get(p.int(1)?) - 1.0, 0, 0),
        ),
        rule(
            "Lemma8",
            LEM,
            "scalar boxes a-1 and b-1 multiply to ab-1",
            vec![scalar_p("a"), scalar_p("b")],
            |d, p| {
                par(
                    d,
                    &[
                        labeled(d, p.scalar(0)? - 1.0, 0, 0)?,
                        labeled(d, p.scalar(1)? - 1.0, 0, 0)?,
                    ],
                )
            },
            |d, p| labeled(d, p.scalar(0)? * p.scalar(1)? - 1.0, 0, 0),
        ),
        rule(
            "Lemma9",
            LEM,
            "the scalar box 0 is the empty diagram",
            vec![],
            |d, _| labeled(d, c(0.0), 0, 0),
            empty_side,
        ),
        rule(
            "Lemma10",
            LEM,
            "for a ≠ 0 the scalar boxes a-1 and 1/a-1 cancel",
            vec![nonzero_scalar("a")],
            |d, p| {
                let a = p.scalar(0)?;
                par(
                    d,
                    &[labeled(d, a - 1.0, 0, 0)?, labeled(d, 1.0 / a - 1.0, 0, 0)?],
                )
            },
            empty_side,
        ),
        rule(
            "Lemma11",
            LEM,
            "H followed by H† (variant 0) or H† followed by H (variant 1) is the identity",
            vec![variant(|_| 1)],
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[h(d)?, hd(d)?])
                } else {
                    seq(&[hd(d)?, h(d)?])
                }
            },
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma12",
            LEM,
            "two Hadamards (variant 0) or two H† (variant 1) make the dualiser",
            vec![variant(|_| 1)],
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[h(d)?, h(d)?])
                } else {
                    seq(&[hd(d)?, hd(d)?])
                }
            },
            |d, _| dual(d),
        ),
        rule(
            "Lemma13",
            LEM,
            "pink spiders joined by a wire fuse, adding their phases",
            vec![
                residue("i"),
                residue("j"),
                int("n", |_| 0, |_| 2),
                int("m", |_| 0, |_| 2),
            ],
            |d, p| {
                let (n, m) = (p.count(2)?, p.count(3)?);
                seq(&[
                    pink(d, p.int(0)?, n, 2)?,
                    par(d, &[pink(d, p.int(1)?, 1, m)?, id(d, 1)?])?,
                ])
            },
            |d, p| pink(d, p.int(0)? + p.int(1)?, p.count(2)?, p.count(3)? + 1),
        ),
        rule(
            "Lemma14",
            LEM,
            "Z boxes joined by two parallel wires fuse",
            vec![phases("a"), phases("b")],
            |d, p| seq(&[z(d, &p.phases(0)?, 1, 2)?, z(d, &p.phases(1)?, 2, 1)?]),
            |d, p| z(d, &p.phases(0)?.product(&p.phases(1)?), 1, 1),
        ),
        rule(
            "Lemma15",
            LEM,
            "a self-loop on a Z box can be removed",
            vec![phases("a")],
            |d, p| {
                seq(&[
                    par(d, &[id(d, 1)?, spider(d, 0, 2)?])?,
                    par(d, &[z(d, &p.phases(0)?, 2, 2)?, id(d, 1)?])?,
                    par(d, &[id(d, 1)?, spider(d, 2, 0)?])?,
                ])
            },
            |d, p| z(d, &p.phases(0)?, 1, 1),
        ),
        rule(
            "Lemma16",
            LEM,
            "the dualiser is an involution",
            vec![],
            |d, _| seq(&[dual(d)?, dual(d)?]),
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma17",
            LEM,
            "a Hadamard next to a dualiser, on either side, is H†",
            vec![variant(|_| 1)],
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[h(d)?, dual(d)?])
                } else {
                    seq(&[dual(d)?, h(d)?])
                }
            },
            |d, _| hd(d),
        ),
        rule(
            "Lemma18",
            LEM,
            "the pink shift K_j through a dualiser becomes K_{-j}",
            vec![residue("j")],
            |d, p| seq(&[pink(d, p.int(0)?, 1, 1)?, dual(d)?]),
            |d, p| seq(&[dual(d)?, pink(d, -p.int(0)?, 1, 1)?]),
        ),
        rule(
            "Lemma19",
            LEM,
            "the dualiser is a plain cap bent into a pink cup",
            vec![],
            |d, _| dual(d),
            |d, _| {
                seq(&[
                    par(d, &[spider(d, 0, 2)?, id(d, 1)?])?,
                    par(d, &[id(d, 1)?, pink(d, 0, 2, 0)?])?,
                ])
            },
        ),
        rule(
            "Lemma20",
            LEM,
            "the pink shift K_j between H and H† is the green spider with phases K_j",
            vec![residue("j")],
            |d, p| seq(&[h(d)?, pink(d, p.int(0)?, 1, 1)?, hd(d)?]),
            |d, p| green(d, &fourier_angles(d, p.int(0)?), 1, 1),
        ),
        rule(
            "Lemma21",
            LEM,
            "a Hadamard turns the green phase K_j into the pink shift K_j",
            vec![residue("j")],
            |d, p| seq(&[h(d)?, pink(d, p.int(0)?, 1, 1)?]),
            |d, p| seq(&[green(d, &fourier_angles(d, p.int(0)?), 1, 1)?, h(d)?]),
        ),
        rule(
            "Lemma22",
            LEM,
            "the pink cap is a plain cap with a dualiser on one leg",
            vec![],
            |d, _| pink(d, 0, 0, 2),
            |d, _| seq(&[spider(d, 0, 2)?, par(d, &[id(d, 1)?, dual(d)?])?]),
        ),
        rule(
            "Lemma23",
            LEM,
            "a pink spider splits the plain state into two plain states",
            vec![],
            |d, _| seq(&[spider(d, 0, 1)?, pink(d, 0, 1, 2)?]),
            |d, _| par(d, &[spider(d, 0, 1)?, spider(d, 0, 1)?]),
        ),
        rule(
            "Lemma24",
            LEM,
            "⟨0| on either branch of a W node (by variant) leaves the identity",
            vec![variant(|_| 1)],
            |d, p| {
                let cap = if p.int(0)? == 0 {
                    par(d, &[bra(d, 0)?, id(d, 1)?])?
                } else {
                    par(d, &[id(d, 1)?, bra(d, 0)?])?
                };
                seq(&[w(d)?, cap])
            },
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma25",
            LEM,
            "the triangle and its inverse cancel in either order",
            vec![variant(|_| 1)],
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[tri(d)?, tri_inv(d)?])
                } else {
                    seq(&[tri_inv(d)?, tri(d)?])
                }
            },
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma26",
            LEM,
            "conjugating a Z box by dualisers reverses its phases; variant 1 is the state form",
            vec![phases("a"), variant(|_| 1)],
            |d, p| {
                let a = p.phases(0)?;
                if p.int(1)? == 0 {
                    seq(&[dual(d)?, z(d, &a, 1, 1)?, dual(d)?])
                } else {
                    seq(&[z(d, &a, 0, 1)?, dual(d)?])
                }
            },
            |d, p| {
                let a = p.phases(0)?.reversed();
                if p.int(1)? == 0 {
                    z(d, &a, 1, 1)
                } else {
                    z(d, &a, 0, 1)
                }
            },
        ),
        rule(
            "Lemma27",
            LEM,
            "multipliers compose by multiplying weights; variant 1: weight -1 is the dualiser",
            vec![residue("a"), residue("b"), variant(|_| 1)],
            |d, p| {
                if p.int(2)? == 0 {
                    seq(&[mult(d, p.int(0)?)?, mult(d, p.int(1)?)?])
                } else {
                    mult(d, -1)
                }
            },
            |d, p| {
                if p.int(2)? == 0 {
                    mult(d, p.int(0)? * p.int(1)?)
                } else {
                    dual(d)
                }
            },
        ),
        rule(
            "Lemma28",
            LEM,
            "a multiplier commutes with the plain copy",
            vec![residue("w")],
            |d, p| seq(&[mult(d, p.int(0)?)?, spider(d, 1, 2)?]),
            |d, p| {
                seq(&[
                    spider(d, 1, 2)?,
                    par(d, &[mult(d, p.int(0)?)?, mult(d, p.int(0)?)?])?,
                ])
            },
        ),
        rule(
            "Lemma29",
            LEM,
            "w+d parallel wires between a plain and a pink spider act as w wires",
            vec![residue("w")],
            |d, p| {
                let k = p.count(0)? + d.get();
                seq(&[spider(d, 1, k)?, pink(d, 0, k, 1)?])
            },
            |d, p| mult(d, p.int(0)?),
        ),
        rule(
            "Lemma30",
            LEM,
            "a multiplier distributes over the pink sum",
            vec![residue("w")],
            |d, p| {
                seq(&[
                    par(d, &[mult(d, p.int(0)?)?, mult(d, p.int(0)?)?])?,
                    pink(d, 0, 2, 1)?,
                ])
            },
            |d, p| seq(&[pink(d, 0, 2, 1)?, mult(d, p.int(0)?)?]),
        ),
        rule(
            "Lemma31",
            LEM,
            "a multiplier w sends |x⟩ to |wx⟩",
            vec![residue("x"), residue("w")],
            |d, p| seq(&[ket(d, p.int(0)?)?, mult(d, p.int(1)?)?]),
            |d, p| ket(d, p.int(0)? * p.int(1)?),
        ),
        rule(
            "Lemma32",
            LEM,
            "the pink sum of |x⟩ and |y⟩ is |x+y⟩",
            vec![residue("x"), residue("y")],
            |d, p| {
                seq(&[
                    par(d, &[ket(d, p.int(0)?)?, ket(d, p.int(1)?)?])?,
                    pink(d, 0, 2, 1)?,
                ])
            },
            |d, p| ket(d, p.int(0)? + p.int(1)?),
        ),
        rule(
            "Lemma33",
            LEM,
            "the multiplier of weight 1 is the identity",
            vec![],
            |d, _| mult(d, 1),
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma34",
            LEM,
            "a one-wire Z box on |x⟩ leaves |x⟩ and the scalar a_x",
            vec![phases("a"), residue("x")],
            |d, p| seq(&[ket(d, p.int(1)?)?, z(d, &p.phases(0)?, 1, 1)?]),
            |d, p| {
                par(
                    d,
                    &[ket(d, p.int(1)?)?, scalar(d, p.phases(0)?.get(p.int(1)?))?],
                )
            },
        ),
        rule(
            "Lemma35",
            LEM,
            "a Z box copies |x⟩ to every output with the scalar a_x",
            vec![phases("a"), residue("x"), int("m", |_| 0, |_| 2)],
            |d, p| seq(&[ket(d, p.int(1)?)?, z(d, &p.phases(0)?, 1, p.count(2)?)?]),
            |d, p| {
                let x = p.int(1)?;
                par(
                    d,
                    &[
                        repeat(d, &ket(d, x)?, p.count(2)?)?,
                        scalar(d, p.phases(0)?.get(x))?,
                    ],
                )
            },
        ),
        rule(
            "Lemma36",
            LEM,
            "the triangle (variant 0) and its inverse (variant 1) fix |0⟩",
            vec![variant(|_| 1)],
            |d, p| {
                seq(&[
                    ket(d, 0)?,
                    if p.int(0)? == 0 { tri(d)? } else { tri_inv(d)? },
                ])
            },
            |d, _| ket(d, 0),
        ),
        rule(
            "Lemma37",
            LEM,
            "a transposed W node fed the plain state is the transposed triangle",
            vec![],
            |d, _| seq(&[par(d, &[id(d, 1)?, spider(d, 0, 1)?])?, wt(d, 2)?]),
            |d, _| transpose(&tri(d)?),
        ),
        rule(
            "Lemma38",
            LEM,
            "the plain effect after a triangle is the Z effect (2,…,2)",
            vec![],
            |d, _| seq(&[tri(d)?, spider(d, 1, 0)?]),
            |d, _| z_const(d, c(2.0), 1, 0),
        ),
        rule(
            "Lemma39",
            LEM,
            "trialgebra with m branches behind a common W node",
            vec![int("m", |_| 2, |_| 3)],
            |d, p| trialgebra(d, p.count(0)?, &[Merge::Pink]),
            |d, p| trialgebra(d, p.count(0)?, &[Merge::W]),
        ),
        rule(
            "Lemma40",
            LEM,
            "trialgebra with several pink sums at once",
            vec![int("m", |_| 2, |_| 3)],
            |d, p| trialgebra(d, p.count(0)?, &[Merge::Pink, Merge::Pink]),
            |d, p| trialgebra(d, p.count(0)?, &[Merge::W, Merge::W]),
        ),
        rule(
            "Lemma41",
            LEM,
            "trialgebra with W nodes and pink spiders mixed",
            vec![int("m", |_| 2, |_| 3)],
            |d, p| trialgebra(d, p.count(0)?, &[Merge::Pink, Merge::W]),
            |d, p| trialgebra(d, p.count(0)?, &[Merge::W, Merge::W]),
        ),
        rule(
            "Lemma42",
            LEM,
            "|0⟩ into either input (by variant) of a transposed W node leaves the identity",
            vec![variant(|_| 1)],
            |d, p| {
                let feed = if p.int(0)? == 0 {
                    par(d, &[ket(d, 0)?, id(d, 1)?])?
                } else {
                    par(d, &[id(d, 1)?, ket(d, 0)?])?
                };
                seq(&[feed, wt(d, 2)?])
            },
            |d, _| id(d, 1),
        ),
        rule(
            "Lemma43",
            LEM,
            "W nodes are associative (variant 0) and commutative (variant 1)",
            vec![variant(|_| 1)],
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[w(d)?, par(d, &[w(d)?, id(d, 1)?])?])
                } else {
                    seq(&[w(d)?, perm(d, &[1, 0])?])
                }
            },
            |d, p| {
                if p.int(0)? == 0 {
                    seq(&[w(d)?, par(d, &[id(d, 1)?, w(d)?])?])
                } else {
                    w(d)
                }
            },
        ),
        rule(
            "Lemma44",
            LEM,
            "the transposed W node is the W node bent with caps and cups",
            vec![int("n", |_| 1, |_| 3)],
            |d, p| wt(d, p.count(0)?),
            |d, p| {
                let n = p.count(0)?;
                let mut order: Vec<usize> = (0..n).flat_map(|k| [k, n + 1 + k]).collect();
                order.push(n);
                seq(&[
                    par(d, &[id(d, n)?, spider(d, 0, 2)?])?,
                    par(d, &[id(d, n + 1)?, wk(d, n)?])?,
                    perm(d, &order)?,
                    par(d, &[repeat(d, &spider(d, 2, 0)?, n)?, id(d, 1)?])?,
                ])
            },
        ),
        rule(
            "Lemma45",
            LEM,
            "a Z state is the transposed W merge of the states a_k T_k",
            vec![phases("a")],
            |d, p| z(d, &p.phases(0)?, 0, 1),
            |d, p| {
                let a = p.phases(0)?;
                let parts: Vec<Diagram> = (1..d.get())
                    .map(|k| {
                        z(
                            d,
                            &PhaseVector::unit(d, k).map(|x| x * a.get(k as i64)),
                            0,
                            1,
                        )
                    })
                    .collect::<Result<_>>()?;
                seq(&[par(d, &parts)?, wt(d, d.get() - 1)?])
            },
        ),
        rule(
            "Lemma46",
            LEM,
            "Z boxes on the two branches of a W node, merged back, add their phases",
            vec![phases("a"), phases("b")],
            |d, p| {
                seq(&[
                    w(d)?,
                    par(d, &[z(d, &p.phases(0)?, 1, 1)?, z(d, &p.phases(1)?, 1, 1)?])?,
                    wt(d, 2)?,
                ])
            },
            |d, p| z(d, &p.phases(0)?.sum(&p.phases(1)?), 1, 1),
        ),
        rule(
            "Lemma47",
            LEM,
            "a Hadamard on |x⟩ is the green state with phases K_x, scaled by 1/√d",
            vec![residue("x")],
            |d, p| seq(&[ket(d, p.int(0)?)?, h(d)?]),
            |d, p| {
                par(
                    d,
                    &[
                        green(d, &fourier_angles(d, p.int(0)?), 0, 1)?,
                        labeled(d, c(1.0 / sqrt_d(d) - 1.0), 0, 0)?,
                    ],
                )
            },
        ),
        rule(
            "Lemma48",
            LEM,
            "a copied wire through multipliers a and b into a cup is ⟨0| after the multiplier a-b",
            vec![residue("a"), residue("b")],
            |d, p| {
                seq(&[
                    spider(d, 1, 2)?,
                    par(d, &[mult(d, p.int(0)?)?, mult(d, p.int(1)?)?])?,
                    spider(d, 2, 0)?,
                ])
            },
            |d, p| seq(&[mult(d, p.int(0)? - p.int(1)?)?, bra(d, 0)?]),
        ),
    ]
}

fn spine(d: Dimension, m: usize, branches: &[Branch]) -> Result<Diagram> {
    Ok(build_spine(d, m, branches))
}
