//! Regression suite replaying the worked examples.

use vgroups_core::braid::{exchange_pair, forbidden_relations, named, ExchangeSide, RelationKind};
use vgroups_core::present::{free_rank_certificate, group_of_virtual_link, quotient_y};
use vgroups_core::{
    abelian_invariants, count_homs, fingerprint, homcount, AbelianInvariants, BraidWord,
    FiniteGroupTable, HomCountOptions, RepKind, Representation, Result, Theory,
};

type Outcome = Result<(bool, String)>;

fn sym3(p: &vgroups_core::Presentation) -> Result<u128> {
    count_homs(p, &FiniteGroupTable::sym3(), HomCountOptions::default())
}

fn unknot() -> Outcome {
    let p = group_of_virtual_link(&BraidWord::empty(1, Theory::Virtual))?;
    let ok = p.relators().is_empty() && p.generators().len() == 2;
    Ok((
        ok,
        format!(
            "unknot: group has {} generators and no relators",
            p.generators().len()
        ),
    ))
}

fn virtual_trefoil() -> Outcome {
    let p = group_of_virtual_link(&named::virtual_trefoil())?;
    let ab = abelian_invariants(&p)?;
    let count = sym3(&p)?;
    let ok = ab == AbelianInvariants::free(2) && count < 36 && free_rank_certificate(&p)?.is_none();
    Ok((
        ok,
        format!("virtual trefoil: group abelianizes to {ab}, sym3 count {count} < 36"),
    ))
}

fn kishino() -> Outcome {
    let c = named::kishino();
    let p = group_of_virtual_link(&c)?;
    let cert = free_rank_certificate(&p)?;
    let q = quotient_y(&p)?;
    let ab = abelian_invariants(&q)?;
    let count = sym3(&q)?;
    let ok = cert == Some(2) && ab == AbelianInvariants::free(1) && count == 6;
    Ok((
        ok,
        format!(
            "Kishino knot: group free of rank {}, y-quotient {ab} with sym3 count {count}",
            cert.map_or("?".into(), |k| k.to_string())
        ),
    ))
}

fn exchange() -> Outcome {
    let b1 = named::exchange_half();
    let (c, v) = exchange_pair(&b1, &b1.inverse(), ExchangeSide::Right)?;
    let battery = homcount::default_battery();
    let opts = HomCountOptions::default();
    let fc = fingerprint(&group_of_virtual_link(&c)?, &battery, opts)?;
    let fv = fingerprint(&group_of_virtual_link(&v)?, &battery, opts)?;
    Ok((fc == fv, format!("exchange pair: fingerprints agree: {fv}")))
}

fn kb() -> Outcome {
    let e = Representation::new(RepKind::Psi, 3)?.evaluate(&named::kishino_kb())?;
    Ok((
        !e.is_identity(),
        "Kb: psi(Kb) is not the identity".to_string(),
    ))
}

fn psi_suite() -> Outcome {
    let mut ok = true;
    let mut held = 0;
    for n in [3, 4] {
        let reports = Representation::new(RepKind::Psi, n)?.check_relations(&[])?;
        ok &= reports.iter().all(|r| r.holds);
        held += reports.len();
    }
    let forbidden =
        Representation::new(RepKind::Psi, 3)?.check_relations(&forbidden_relations(3))?;
    ok &= forbidden
        .iter()
        .filter(|r| matches!(r.relation.kind, RelationKind::F1 | RelationKind::F2))
        .all(|r| !r.holds);
    Ok((
        ok,
        format!("psi: {held} relations hold for n = 3, 4; F1 and F2 fail"),
    ))
}

fn wada_classification() -> Outcome {
    let mut ok = true;
    for k in 1..=4u8 {
        let reports = Representation::new(RepKind::wada(k, 1)?, 3)?.check_relations(&[])?;
        let failing: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
        ok &= if k <= 2 {
            failing.is_empty()
        } else {
            !failing.is_empty() && failing.iter().all(|r| r.relation.kind == RelationKind::F1)
        };
    }
    Ok((
        ok,
        "Wada: types 1, 2 satisfy the welded relations; 3, 4 fail only the F1 mixed relation"
            .to_string(),
    ))
}

/// Returns the report and whether every check passed.
pub fn run() -> (String, bool) {
    let checks: [fn() -> Outcome; 7] = [
        unknot,
        virtual_trefoil,
        kishino,
        exchange,
        kb,
        psi_suite,
        wada_classification,
    ];
    let mut out = String::new();
    let mut all = true;
    for check in checks {
        let (ok, line) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        all &= ok;
        out.push_str(if ok { "PASS " } else { "FAIL " });
        out.push_str(&line);
        out.push('\n');
    }
    (out, all)
}
