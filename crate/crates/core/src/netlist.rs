//! Line-oriented text format for circuit scripts.
//!
//! ```text
//! # declarations
//! photon a spatial(a1, a2)
//! nv nv1 init plusminus
//!
//! STEP 1
//! NV nv1 a direct        # NV <nv> <photon> [modes] <routing>
//! BLOCK
//! HNV nv1
//! BS a a1 a2
//! PBS a a1 a2
//! H a a2                 # H|X <photon> [modes]
//! PHASE a a1 pi
//! SIGMAZ a -
//! MEASURE nv1
//! FF nv1 sigmaz a        # FF <nv> phase <photon> <mode> [angle] | sigmaz <photon> | -sigmaz <photon>
//! ```
//!
//! Mode lists are comma-separated (`c4,c5`); omitting them means every mode
//! of the photon. Routings are `direct`, `xconj`, `both`, `uniform`, `lpath`
//! or `<R>/<L>` with each side one of `in`, `flip`, `pass`. Elements outside
//! any `STEP` open an implicitly numbered step; `BLOCK` starts a new block
//! inside the current step.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::gate::{Block, CircuitScript, Element, FeedForwardRule, Step};
use crate::hilbert::{Layout, ModeId, Modes, NvId, PhotonDecl, PhotonId, Port, Routing, SpinInit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct NetlistError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
    offset: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                    offset: s,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
            offset: s,
        });
    }
    out
}

struct Parser {
    photons: Vec<PhotonDecl>,
    spins: Vec<String>,
    spin_init: Vec<SpinInit>,
    declared_later: HashSet<String>,
    steps: Vec<Step>,
    measurements: Vec<NvId>,
    feed_forward: Vec<FeedForwardRule>,
    line: usize,
}

impl Parser {
    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, NetlistError> {
        Err(NetlistError {
            line: self.line,
            column,
            message: message.into(),
        })
    }

    fn undeclared<T>(&self, kind: &str, t: Token) -> Result<T, NetlistError> {
        if self.declared_later.contains(t.text) {
            self.err(
                t.column,
                format!("{kind} '{}' used before its declaration", t.text),
            )
        } else {
            self.err(t.column, format!("unknown {kind} '{}'", t.text))
        }
    }

    fn photon(&self, t: Token) -> Result<PhotonId, NetlistError> {
        match self.photons.iter().position(|p| p.name == t.text) {
            Some(i) => Ok(PhotonId(i)),
            None => self.undeclared("photon", t),
        }
    }

    fn nv(&self, t: Token) -> Result<NvId, NetlistError> {
        match self.spins.iter().position(|s| s == t.text) {
            Some(i) => Ok(NvId(i)),
            None => self.undeclared("NV", t),
        }
    }

    fn mode(&self, p: PhotonId, name: &str, column: usize) -> Result<ModeId, NetlistError> {
        match self.photons[p.0].modes.iter().position(|m| m == name) {
            Some(i) => Ok(ModeId(i)),
            None => self.err(
                column,
                format!("photon '{}' has no mode '{name}'", self.photons[p.0].name),
            ),
        }
    }

    fn modes(&self, p: PhotonId, t: Option<Token>) -> Result<Modes, NetlistError> {
        let Some(t) = t else {
            return Ok(Modes::All);
        };
        let mut v = Vec::new();
        for name in t.text.split(',') {
            if name.is_empty() {
                return self.err(t.column, "empty entry in mode list");
            }
            v.push(self.mode(p, name, t.column)?);
        }
        Ok(Modes::Only(v))
    }

    fn arity(&self, toks: &[Token], allowed: &[usize], usage: &str) -> Result<(), NetlistError> {
        let n = toks.len() - 1;
        if allowed.contains(&n) {
            Ok(())
        } else {
            let col = toks
                .get(allowed.iter().copied().max().unwrap_or(0) + 1)
                .unwrap_or(&toks[0]);
            self.err(
                col.column,
                format!("'{}' takes {usage}, got {n} argument(s)", toks[0].text),
            )
        }
    }

    fn current_block(&mut self) -> &mut Vec<Element> {
        if self.steps.is_empty() {
            let label = (self.steps.len() + 1).to_string();
            self.steps.push(Step {
                label,
                blocks: Vec::new(),
            });
        }
        let step = self.steps.last_mut().expect("step exists");
        if step.blocks.is_empty() {
            step.blocks.push(Block::new(Vec::new()));
        }
        &mut step.blocks.last_mut().expect("block exists").elements
    }

    fn push(&mut self, e: Element) {
        self.current_block().push(e);
    }

    fn angle(&self, t: Token) -> Result<f64, NetlistError> {
        let v = match t.text {
            "pi" => PI,
            "-pi" => -PI,
            s => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => return self.err(t.column, format!("bad angle '{s}'")),
            },
        };
        Ok(v)
    }

    fn photon_decl(&mut self, raw: &str, toks: &[Token]) -> Result<(), NetlistError> {
        if toks.len() < 3 {
            return self.err(
                toks[0].column,
                "expected 'photon <id> spatial(<mode>, ...)'",
            );
        }
        let name = toks[1];
        let code = raw.split('#').next().unwrap_or("");
        let rest = code[name.offset + name.text.len()..].trim();
        let Some(list) = rest
            .strip_prefix("spatial")
            .map(str::trim)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
        else {
            return self.err(toks[2].column, "expected 'spatial(<mode>, ...)'");
        };
        let modes: Vec<String> = list.split(',').map(|m| m.trim().to_string()).collect();
        if modes
            .iter()
            .any(|m| m.is_empty() || m.contains(char::is_whitespace))
        {
            return self.err(toks[2].column, "malformed spatial-mode list");
        }
        let unique: HashSet<_> = modes.iter().collect();
        if unique.len() != modes.len() {
            return self.err(toks[2].column, "duplicate spatial mode");
        }
        if self.photons.iter().any(|p| p.name == name.text) {
            return self.err(
                name.column,
                format!("photon '{}' declared twice", name.text),
            );
        }
        self.photons.push(PhotonDecl {
            name: name.text.to_string(),
            modes,
        });
        Ok(())
    }

    fn nv_decl(&mut self, toks: &[Token]) -> Result<(), NetlistError> {
        if toks.len() != 4 || toks[2].text != "init" {
            return self.err(toks[0].column, "expected 'nv <id> init <state>'");
        }
        let Some(init) = SpinInit::from_keyword(toks[3].text) else {
            return self.err(
                toks[3].column,
                format!(
                    "unknown NV state '{}' (plus, minus, plusminus, minusplus)",
                    toks[3].text
                ),
            );
        };
        if self.spins.iter().any(|s| s == toks[1].text) {
            return self.err(
                toks[1].column,
                format!("NV '{}' declared twice", toks[1].text),
            );
        }
        self.spins.push(toks[1].text.to_string());
        self.spin_init.push(init);
        Ok(())
    }

    fn statement(&mut self, raw: &str, toks: &[Token]) -> Result<(), NetlistError> {
        let head = toks[0];
        match head.text {
            "photon" => self.photon_decl(raw, toks),
            "nv" => self.nv_decl(toks),
            "STEP" => {
                self.arity(toks, &[0, 1], "an optional label")?;
                let label = toks
                    .get(1)
                    .map(|t| t.text.to_string())
                    .unwrap_or_else(|| (self.steps.len() + 1).to_string());
                self.steps.push(Step {
                    label,
                    blocks: Vec::new(),
                });
                Ok(())
            }
            "BLOCK" => {
                self.arity(toks, &[0], "no arguments")?;
                let step = self.steps.last_mut();
                match step {
                    Some(s) if s.blocks.last().is_some_and(|b| !b.elements.is_empty()) => {
                        s.blocks.push(Block::new(Vec::new()))
                    }
                    _ => {}
                }
                Ok(())
            }
            "H" | "X" => {
                self.arity(toks, &[1, 2], "a photon and an optional mode list")?;
                let photon = self.photon(toks[1])?;
                let modes = self.modes(photon, toks.get(2).copied())?;
                self.push(if head.text == "H" {
                    Element::HalfWaveH { photon, modes }
                } else {
                    Element::HalfWaveX { photon, modes }
                });
                Ok(())
            }
            "BS" | "PBS" => {
                self.arity(toks, &[3], "a photon and two modes")?;
                let photon = self.photon(toks[1])?;
                let m1 = self.mode(photon, toks[2].text, toks[2].column)?;
                let m2 = self.mode(photon, toks[3].text, toks[3].column)?;
                if m1 == m2 {
                    return self.err(toks[3].column, "splitter needs two distinct modes");
                }
                self.push(if head.text == "BS" {
                    Element::BeamSplitter { photon, m1, m2 }
                } else {
                    Element::PolarizingSplitter { photon, m1, m2 }
                });
                Ok(())
            }
            "NV" => {
                self.arity(
                    toks,
                    &[3, 4],
                    "an NV, a photon, optional modes and a routing",
                )?;
                let nv = self.nv(toks[1])?;
                let photon = self.photon(toks[2])?;
                let modes = if toks.len() == 5 {
                    self.modes(photon, Some(toks[3]))?
                } else {
                    Modes::All
                };
                let rt = toks[toks.len() - 1];
                let Some(routing) = parse_routing(rt.text) else {
                    return self.err(rt.column, format!("unknown routing '{}'", rt.text));
                };
                self.push(Element::Cavity {
                    photon,
                    nv,
                    modes,
                    routing,
                });
                Ok(())
            }
            "HNV" => {
                self.arity(toks, &[1], "one NV")?;
                let nv = self.nv(toks[1])?;
                self.push(Element::NvHadamard { nv });
                Ok(())
            }
            "PHASE" => {
                self.arity(toks, &[3], "a photon, a mode and an angle")?;
                let photon = self.photon(toks[1])?;
                let mode = self.mode(photon, toks[2].text, toks[2].column)?;
                let phase = self.angle(toks[3])?;
                self.push(Element::PhaseShift {
                    photon,
                    mode,
                    phase,
                });
                Ok(())
            }
            "SIGMAZ" => {
                self.arity(toks, &[1, 2], "a photon and an optional sign")?;
                let photon = self.photon(toks[1])?;
                let sign = self.sign(toks.get(2).copied())?;
                self.push(Element::PolSigmaZ { photon, sign });
                Ok(())
            }
            "MEASURE" => {
                self.arity(toks, &[1], "one NV")?;
                let nv = self.nv(toks[1])?;
                if self.measurements.contains(&nv) {
                    return self.err(toks[1].column, format!("{} measured twice", toks[1].text));
                }
                self.measurements.push(nv);
                Ok(())
            }
            "FF" => self.feed_forward_rule(toks),
            other => self.err(head.column, format!("unknown statement '{other}'")),
        }
    }

    fn sign(&self, t: Option<Token>) -> Result<f64, NetlistError> {
        match t.map(|t| (t.text, t.column)) {
            None | Some(("+", _)) => Ok(1.0),
            Some(("-", _)) => Ok(-1.0),
            Some((s, c)) => self.err(c, format!("expected '+' or '-', got '{s}'")),
        }
    }

    fn feed_forward_rule(&mut self, toks: &[Token]) -> Result<(), NetlistError> {
        if toks.len() < 3 {
            return self.err(toks[0].column, "expected 'FF <nv> <correction> ...'");
        }
        let nv = self.nv(toks[1])?;
        if !self.measurements.contains(&nv) {
            return self.err(
                toks[1].column,
                format!("feed-forward on {} before it is measured", toks[1].text),
            );
        }
        let kind = toks[2];
        let args = &toks[2..];
        let correction = match kind.text {
            "phase" => {
                self.arity(args, &[2, 3], "a photon, a mode and an optional angle")?;
                let photon = self.photon(args[1])?;
                let mode = self.mode(photon, args[2].text, args[2].column)?;
                let phase = match args.get(3) {
                    Some(t) => self.angle(*t)?,
                    None => PI,
                };
                Element::PhaseShift {
                    photon,
                    mode,
                    phase,
                }
            }
            "sigmaz" | "-sigmaz" => {
                self.arity(args, &[1], "a photon")?;
                let photon = self.photon(args[1])?;
                let sign = if kind.text == "sigmaz" { 1.0 } else { -1.0 };
                Element::PolSigmaZ { photon, sign }
            }
            other => {
                return self.err(
                    kind.column,
                    format!("unknown correction '{other}' (phase, sigmaz, -sigmaz)"),
                )
            }
        };
        self.feed_forward.push(FeedForwardRule { nv, correction });
        Ok(())
    }
}

pub fn parse_routing(s: &str) -> Option<Routing> {
    Some(match s {
        "direct" => Routing::DIRECT,
        "xconj" => Routing::X_CONJUGATED,
        "both" => Routing::BOTH,
        "uniform" => Routing::UNIFORM,
        "lpath" => Routing::L_PATH,
        _ => {
            let (r, l) = s.split_once('/')?;
            let port = |p: &str| match p {
                "in" => Some(Port::Enter),
                "flip" => Some(Port::EnterFlipped),
                "pass" => Some(Port::Bypass),
                _ => None,
            };
            Routing::new(port(r)?, port(l)?)
        }
    })
}

pub fn routing_token(r: Routing) -> String {
    for (name, known) in [
        ("direct", Routing::DIRECT),
        ("xconj", Routing::X_CONJUGATED),
        ("both", Routing::BOTH),
        ("uniform", Routing::UNIFORM),
        ("lpath", Routing::L_PATH),
    ] {
        if r == known {
            return name.to_string();
        }
    }
    let port = |p: Port| match p {
        Port::Enter => "in",
        Port::EnterFlipped => "flip",
        Port::Bypass => "pass",
    };
    format!("{}/{}", port(r.right), port(r.left))
}

pub fn parse_netlist(text: &str) -> Result<CircuitScript, NetlistError> {
    let mut declared_later = HashSet::new();
    for line in text.lines() {
        let toks = tokenize(line);
        if toks.len() >= 2 && (toks[0].text == "photon" || toks[0].text == "nv") {
            declared_later.insert(toks[1].text.to_string());
        }
    }
    let mut p = Parser {
        photons: Vec::new(),
        spins: Vec::new(),
        spin_init: Vec::new(),
        declared_later,
        steps: Vec::new(),
        measurements: Vec::new(),
        feed_forward: Vec::new(),
        line: 0,
    };
    for (n, raw) in text.lines().enumerate() {
        p.line = n + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        p.statement(raw, &toks)?;
    }
    let end = text.lines().count().max(1);
    let layout = Layout::new(p.photons, p.spins).map_err(|e| NetlistError {
        line: end,
        column: 1,
        message: e.to_string(),
    })?;
    let mut steps = p.steps;
    for s in &mut steps {
        s.blocks.retain(|b| !b.elements.is_empty());
    }
    let script = CircuitScript {
        layout: Arc::new(layout),
        spin_init: p.spin_init,
        steps,
        measurements: p.measurements,
        feed_forward: p.feed_forward,
    };
    script.validate().map_err(|e| NetlistError {
        line: end,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(script)
}

fn fmt_angle(a: f64) -> String {
    if a == PI {
        "pi".into()
    } else if a == -PI {
        "-pi".into()
    } else {
        format!("{a:?}")
    }
}

fn fmt_modes(l: &Layout, p: PhotonId, m: &Modes) -> String {
    match m {
        Modes::All => String::new(),
        Modes::Only(v) => {
            let names: Vec<&str> = v
                .iter()
                .map(|m| l.photons()[p.0].modes[m.0].as_str())
                .collect();
            format!(" {}", names.join(","))
        }
    }
}

fn fmt_element(l: &Layout, e: &Element) -> String {
    let ph = |p: &PhotonId| l.photons()[p.0].name.as_str();
    let md = |p: &PhotonId, m: &ModeId| l.photons()[p.0].modes[m.0].as_str();
    let nv = |n: &NvId| l.spins()[n.0].as_str();
    match e {
        Element::HalfWaveH { photon, modes } => {
            format!("H {}{}", ph(photon), fmt_modes(l, *photon, modes))
        }
        Element::HalfWaveX { photon, modes } => {
            format!("X {}{}", ph(photon), fmt_modes(l, *photon, modes))
        }
        Element::BeamSplitter { photon, m1, m2 } => {
            format!("BS {} {} {}", ph(photon), md(photon, m1), md(photon, m2))
        }
        Element::PolarizingSplitter { photon, m1, m2 } => {
            format!("PBS {} {} {}", ph(photon), md(photon, m1), md(photon, m2))
        }
        Element::Cavity {
            photon,
            nv: n,
            modes,
            routing,
        } => format!(
            "NV {} {}{} {}",
            nv(n),
            ph(photon),
            fmt_modes(l, *photon, modes),
            routing_token(*routing)
        ),
        Element::NvHadamard { nv: n } => format!("HNV {}", nv(n)),
        Element::PhaseShift {
            photon,
            mode,
            phase,
        } => format!(
            "PHASE {} {} {}",
            ph(photon),
            md(photon, mode),
            fmt_angle(*phase)
        ),
        Element::PolSigmaZ { photon, sign } => {
            format!(
                "SIGMAZ {} {}",
                ph(photon),
                if *sign < 0.0 { "-" } else { "+" }
            )
        }
    }
}

/// Canonical text form; parsing it gives back an equal script.
pub fn print_netlist(script: &CircuitScript) -> String {
    let l = &script.layout;
    let mut out = String::new();
    for p in l.photons() {
        let _ = writeln!(out, "photon {} spatial({})", p.name, p.modes.join(", "));
    }
    for (name, init) in l.spins().iter().zip(&script.spin_init) {
        let _ = writeln!(out, "nv {name} init {}", init.keyword());
    }
    for step in &script.steps {
        let _ = writeln!(out, "\nSTEP {}", step.label);
        for (k, block) in step.blocks.iter().enumerate() {
            if k > 0 {
                out.push_str("BLOCK\n");
            }
            for e in &block.elements {
                let _ = writeln!(out, "{}", fmt_element(l, e));
            }
        }
    }
    if !script.measurements.is_empty() {
        out.push('\n');
    }
    for nv in &script.measurements {
        let _ = writeln!(out, "MEASURE {}", l.spins()[nv.0]);
    }
    for rule in &script.feed_forward {
        let nv = &l.spins()[rule.nv.0];
        let line = match &rule.correction {
            Element::PhaseShift {
                photon,
                mode,
                phase,
            } => format!(
                "FF {nv} phase {} {} {}",
                l.photons()[photon.0].name,
                l.photons()[photon.0].modes[mode.0],
                fmt_angle(*phase)
            ),
            Element::PolSigmaZ { photon, sign } => format!(
                "FF {nv} {} {}",
                if *sign < 0.0 { "-sigmaz" } else { "sigmaz" },
                l.photons()[photon.0].name
            ),
            other => format!("# unsupported correction {other:?}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
