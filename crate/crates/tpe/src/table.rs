//! Plain-text rendering of reports.

use std::fmt::Write;

use crate::json::{
    BeliefsJson, Body, CheckJson, Envelope, IntervalJson, PayoffJson, RationalJson, SimulationJson, ThresholdJson,
};

pub fn render(report: &Envelope) -> String {
    let mut out = String::new();
    match &report.body {
        Body::Payoff(p) => payoff(&mut out, p),
        Body::Simulate(s) => {
            let _ = writeln!(out, "profile {}  delta {}", s.profile, s.game.delta.decimal);
            simulation(&mut out, &s.simulation);
        }
        Body::Check(c) => check(&mut out, c),
        Body::Threshold(t) => threshold(&mut out, t),
        Body::Beliefs(b) => beliefs(&mut out, b),
    }
    out
}

fn exact(q: &RationalJson) -> String {
    if q.den == "1" {
        q.num.clone()
    } else {
        format!("{}/{} = {}", q.num, q.den, q.decimal)
    }
}

fn interval(i: &IntervalJson) -> String {
    if i.exact {
        i.lo.decimal.clone()
    } else {
        format!("[{}, {}]", i.lo.decimal, i.hi.decimal)
    }
}

fn payoff(out: &mut String, p: &PayoffJson) {
    let _ = writeln!(
        out,
        "profile {}  delta {}  match_prob {}",
        p.profile, p.game.delta.decimal, p.game.match_prob.decimal
    );
    if let Some(s) = &p.start {
        let sel = s
            .selected
            .as_deref()
            .map(|x| format!(", {x} selected"))
            .unwrap_or_default();
        let _ = writeln!(out, "from {}{sel}", s.history);
    }
    let _ = writeln!(out, "{:<4} {:<32} bounds", "", "exact value");
    for v in &p.values {
        let b = v.bounds.as_ref().map_or(String::new(), |b| {
            format!(
                "[{}, {}] at H={}",
                b.lower.decimal,
                b.upper.decimal,
                p.horizon.unwrap_or(0)
            )
        });
        let _ = writeln!(out, "{:<4} {:<32} {b}", v.player, exact(&v.exact));
    }
    if let Some(s) = &p.simulation {
        simulation(out, s);
    }
}

fn simulation(out: &mut String, s: &SimulationJson) {
    let _ = writeln!(
        out,
        "monte carlo: {} runs, horizon {}, seed {}",
        s.runs, s.horizon, s.seed
    );
    let _ = writeln!(
        out,
        "{:<4} {:>14} {:>12} {:>12} {:>14}  agrees",
        "", "mean", "std error", "tail", "exact"
    );
    for p in &s.players {
        let ex = p.exact.as_ref().map_or(String::new(), |e| e.decimal.clone());
        let ag = p
            .agrees
            .map_or(String::new(), |a| if a { "yes".into() } else { "NO".into() });
        let _ = writeln!(
            out,
            "{:<4} {:>14.6} {:>12.6} {:>12.3e} {:>14}  {ag}",
            p.player, p.mean, p.std_error, p.tail_bound, ex
        );
    }
}

fn check(out: &mut String, c: &CheckJson) {
    let _ = writeln!(
        out,
        "delta {}  T={} R={} P={} S={}",
        c.game.delta.decimal, c.game.t.decimal, c.game.r.decimal, c.game.p.decimal, c.game.s.decimal
    );
    for case in &c.cases {
        let _ = writeln!(
            out,
            "Case {} [{}] {}: {}",
            case.case,
            case.player,
            case.info_set,
            if case.holds { "holds" } else { "FAILS" }
        );
        let _ = writeln!(
            out,
            "    conform  {:<28} {}",
            case.conform.label, case.conform.value.decimal
        );
        for d in &case.deviations {
            let _ = writeln!(out, "    deviate  {:<28} {}", d.label, d.value.decimal);
        }
        for x in &case.cross_checks {
            let vals = match (&x.closed_form, &x.chain) {
                (Some(a), Some(b)) => format!("{} vs chain {}", a.decimal, b.decimal),
                (None, Some(b)) => format!("chain {}", b.decimal),
                (Some(a), None) => a.decimal.clone(),
                (None, None) => String::new(),
            };
            let _ = writeln!(
                out,
                "    check    {:<28} {:<10} {vals} {}",
                x.label,
                x.relation,
                if x.ok { "ok" } else { "MISMATCH" }
            );
        }
    }
    for s in &c.searches {
        let _ = writeln!(
            out,
            "search {} depth {}: {} information sets, {} plans, best gain {}{}",
            s.deviator,
            s.depth,
            s.info_sets,
            s.plans_tried,
            s.best_gain.decimal,
            if s.incomplete { " (incomplete)" } else { "" }
        );
        if let Some(w) = &s.witness {
            let _ = writeln!(out, "    at {}: {}", w.info_set, w.plan);
        }
    }
    let _ = writeln!(
        out,
        "verdict: {}",
        if c.verdict {
            "sequential equilibrium holds"
        } else {
            "FAILS"
        }
    );
}

fn threshold(out: &mut String, t: &ThresholdJson) {
    match (&t.lower, &t.upper, &t.delta_star) {
        (Some(lo), Some(hi), Some(d)) => {
            let _ = writeln!(out, "delta* = {d}");
            let _ = writeln!(out, "bracket [{}, {}]", lo.decimal, hi.decimal);
            if let Some(r) = t.quadratic_root {
                let _ = writeln!(
                    out,
                    "quadratic root {r:.12} (inside bracket: {})",
                    t.quadratic_in_bracket.unwrap_or(false)
                );
            }
        }
        _ => {
            let _ = writeln!(out, "{}", t.message.as_deref().unwrap_or("no interior threshold"));
        }
    }
}

fn beliefs(out: &mut String, b: &BeliefsJson) {
    let _ = writeln!(
        out,
        "observation {}  scheme {}  profile {}",
        b.observation, b.scheme, b.profile
    );
    for p in &b.posteriors {
        let _ = writeln!(out, "eps = {}", exact(&p.eps));
        for e in &p.explanations {
            let _ = writeln!(
                out,
                "    {:<28} {:<30} {:<18} {}",
                e.history,
                interval(&e.mass),
                e.order.text,
                e.class
            );
        }
        for c in &p.classes {
            let _ = writeln!(
                out,
                "  {:<30} mass {:<30} order {}",
                c.class,
                interval(&c.mass),
                c.order.text
            );
        }
    }
    if let Some(l) = &b.limit {
        let lc = l.limit_class.as_deref().unwrap_or("none");
        let _ = writeln!(out, "limit: {lc} (stable: {}, increasing: {})", l.stable, l.monotone);
    }
}
