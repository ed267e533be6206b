use super::ata::Ata;

/// Locations from which no bad configuration set can ever be reached: the
/// greatest set of non-accepting locations such that every conjunct of every
/// rule of each of them mentions a location of the set.
pub fn dead_locations(a: &Ata) -> Vec<bool> {
    let mut dead: Vec<bool> = a.location_ids().map(|q| !a.is_accepting(q)).collect();
    loop {
        let mut changed = false;
        for q in a.location_ids() {
            if !dead[q.index()] {
                continue;
            }
            let stays = a.symbol_ids().all(|s| {
                a.rules(q, s).iter().all(|r| {
                    r.dnf().conjuncts().iter().all(|c| c.iter().any(|at| dead[at.loc.index()]))
                })
            });
            if !stays {
                dead[q.index()] = false;
                changed = true;
            }
        }
        if !changed {
            return dead;
        }
    }
}
