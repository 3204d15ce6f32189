//! Typechecker sessions: the fresh-name supply, the rule trace, and the
//! debug-mode step tripwire. A session is single-owner; independent files get
//! independent sessions.

use crate::syntax::{EVar, Ident, TermVar, UVar};

#[derive(Debug, Default)]
pub struct Session {
    next_uid: u64,
    trace: Option<Vec<String>>,
    steps: u64,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn fresh(&mut self, name: &str) -> Ident {
        self.next_uid += 1;
        Ident::new(name, self.next_uid)
    }

    pub fn fresh_uvar(&mut self, name: &str) -> UVar {
        UVar(self.fresh(name))
    }

    pub fn fresh_evar(&mut self, name: &str) -> EVar {
        EVar(self.fresh(name))
    }

    pub fn fresh_termvar(&mut self, name: &str) -> TermVar {
        TermVar(self.fresh(name))
    }

    /// Fork a session for re-running a judgment from the same state: the
    /// clone hands out the same uids in the same order.
    pub fn fork(&self) -> Session {
        Session { next_uid: self.next_uid, trace: None, steps: self.steps }
    }

    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<String> {
        self.trace.take().unwrap_or_default()
    }

    pub fn tracing(&self) -> bool {
        self.trace.is_some()
    }

    /// Record one applied rule. `detail` is only rendered when tracing is on.
    pub(crate) fn trace(&mut self, rule: &str, detail: impl FnOnce() -> String) {
        if let Some(buf) = &mut self.trace {
            let d = detail();
            if d.is_empty() {
                buf.push(rule.to_string());
            } else {
                buf.push(format!("{rule}  {d}"));
            }
        }
    }

    /// Totality tripwire: every judgment entry bumps the counter, and debug
    /// builds fail loudly if a single typecheck runs away.
    #[inline]
    pub(crate) fn step(&mut self) {
        self.steps += 1;
        debug_assert!(
            self.steps < 50_000_000,
            "judgment step budget exceeded; suspected nontermination"
        );
    }

    /// Reset the tripwire at a public entry point.
    pub(crate) fn reset_steps(&mut self) {
        self.steps = 0;
    }
}

/// The typechecker: all judgments are methods on this, so they share the
/// session's fresh-name supply and trace.
pub struct Tc<'s> {
    pub sess: &'s mut Session,
}

impl<'s> Tc<'s> {
    pub fn new(sess: &'s mut Session) -> Tc<'s> {
        sess.reset_steps();
        Tc { sess }
    }
}
