//! Closed-form invariants of 3-braid closures from Murasugi normal forms.
//!
//! For a 3-braid `β` exactly one of `s = w - 2`, `s = w + 2` and `s = w`
//! holds. The first is read off `β` itself, the second off a normal form of
//! the mirror, and the third is what remains once both are known to fail.
//! `d_t` and ψ follow from `s - w`.

use serde::Serialize;

use crate::braid::MurasugiNF;
use crate::error::{Error, Result};
use crate::field::FieldKind;
use crate::invariants::{psi_nonvanishing, s_invariant};
use crate::pl::PLFunction;
use crate::shapes::dt3_closed_form;

/// Where a classification came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    ClosedForm,
    MirrorClosedForm,
    ComputedFallback,
}

/// What to do when the closed forms cannot decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fallback {
    #[default]
    None,
    Compute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification3 {
    pub writhe: i32,
    pub s: i32,
    pub delta: i32,
    pub dt: PLFunction,
    pub psi_nonzero: bool,
    pub source: Source,
}

/// Normal forms with `s = w - 2`; the same list is where ψ survives.
pub fn in_list_a(nf: &MurasugiNF) -> Result<bool> {
    nf.validate()?;
    Ok(match *nf {
        MurasugiNF::Family1 { d, .. } | MurasugiNF::Family3 { d, .. } => d > 0,
        MurasugiNF::Family2 { d, m } => (d == 0 && m >= 0) || (d == 1 && m >= -4) || d > 1,
    })
}

/// Mirror normal forms of braids with `s = w + 2`.
pub fn in_list_b(nf: &MurasugiNF) -> Result<bool> {
    nf.validate()?;
    Ok(match *nf {
        MurasugiNF::Family1 { d, .. } | MurasugiNF::Family3 { d, .. } => d > 0,
        MurasugiNF::Family2 { d, m } => (d == 1 && m >= -3) || d > 1,
    })
}

/// Normal form of the mirror, when it is known without a conjugacy search.
/// `h` is central and mirrors to `h^-1`, so family 2 maps to itself.
pub fn mirror_nf(nf: &MurasugiNF) -> Option<MurasugiNF> {
    match *nf {
        MurasugiNF::Family2 { d, m } => Some(MurasugiNF::Family2 { d: -d, m: -m }),
        _ => None,
    }
}

fn finish(writhe: i32, delta: i32, psi_nonzero: bool, source: Source) -> Result<Classification3> {
    Ok(Classification3 {
        writhe,
        s: writhe + delta,
        delta,
        dt: dt3_closed_form(delta, writhe)?,
        psi_nonzero,
        source,
    })
}

pub fn classify3(nf: &MurasugiNF, nf_of_mirror: Option<&MurasugiNF>, fallback: Fallback) -> Result<Classification3> {
    nf.validate()?;
    let writhe = nf.writhe()?;
    let computed_mirror = mirror_nf(nf);
    if let (Some(given), Some(known)) = (nf_of_mirror, &computed_mirror) {
        given.validate()?;
        if given != known {
            return Err(Error::Inconsistent(format!(
                "{given} is not the mirror of {nf}; expected {known}"
            )));
        }
    }
    if in_list_a(nf)? {
        return finish(writhe, -2, true, Source::ClosedForm);
    }
    if let Some(mu) = nf_of_mirror.cloned().or(computed_mirror) {
        mu.validate()?;
        if mu.writhe()? != -writhe {
            return Err(Error::Inconsistent(format!(
                "{mu} has writhe {}, the mirror of {nf} has writhe {}",
                mu.writhe()?,
                -writhe
            )));
        }
        let delta = if in_list_b(&mu)? { 2 } else { 0 };
        return finish(writhe, delta, false, Source::MirrorClosedForm);
    }
    match fallback {
        Fallback::None => Err(Error::Undetermined),
        Fallback::Compute => {
            let word = nf.to_word()?;
            let delta = s_invariant(&word)? - writhe;
            if ![-2, 0, 2].contains(&delta) {
                return Err(Error::Internal(format!("3-braid {nf} has s - w = {delta}")));
            }
            let psi = psi_nonvanishing(&word, FieldKind::Q)?;
            finish(writhe, delta, psi, Source::ComputedFallback)
        }
    }
}
