"""Levi-Civita curvature from order-3 metric jets.

Sign convention.  With ``Rup[p, l, i, j]`` the ``p`` component of
R(d_i, d_j) d_l = nabla_i nabla_j d_l - nabla_j nabla_i d_l, i.e.

    Rup[p, l, i, j] = d_i G^p_jl - d_j G^p_il + G^p_iq G^q_jl - G^p_jq G^q_il,

the stored lowered tensor is ``riemann[i, j, k, l] = g_kp Rup[p, l, i, j]``.
Then a space of constant curvature K has
``R_ijkl = K (g_ik g_jl - g_il g_jk)`` (round spheres have R_ijij > 0),
``R_ik = g^jl R_ijkl``, and every scalar field satisfies the commutation rule
``f_kji - f_kij = f^l R_lkji`` where ``f_kji`` is the covariant derivative of
the Hessian ``f_kj`` in direction ``i``.

All arrays carry a leading batch shape; index names below omit it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import MetricJet3, ScalarJet3, inverse_metric_jet

_es = np.einsum


@dataclass(frozen=True)
class CurvaturePack:
    g: np.ndarray
    ginv: np.ndarray
    dginv: np.ndarray
    gamma: np.ndarray        # gamma[k, i, j] = G^k_ij
    dgamma: np.ndarray       # dgamma[k, i, j, l] = d_l G^k_ij
    riemann: np.ndarray      # R_ijkl, all indices down
    ricci: np.ndarray
    scalar: np.ndarray
    grad_scalar: np.ndarray  # d_i R
    weyl: np.ndarray
    grad_ricci: np.ndarray   # R_ij,k (covariant)

    @property
    def dim(self) -> int:
        return self.g.shape[-1]


def weyl_from(riemann, ricci, scalar, g) -> np.ndarray:
    n = g.shape[-1]
    kulkarni_ric = (_es("...ik,...jl->...ijkl", ricci, g) - _es("...il,...jk->...ijkl", ricci, g)
                    + _es("...jl,...ik->...ijkl", ricci, g) - _es("...jk,...il->...ijkl", ricci, g))
    gg = _es("...ik,...jl->...ijkl", g, g) - _es("...il,...jk->...ijkl", g, g)
    R = np.asarray(scalar)[..., None, None, None, None]
    return riemann - kulkarni_ric / (n - 2) + R * gg / ((n - 1) * (n - 2))


def curvature_pack(mj: MetricJet3) -> CurvaturePack:
    """All curvature quantities at the points of ``mj``."""
    g, dg, d2g, d3g = mj.g, mj.dg, mj.d2g, mj.d3g
    G, dG = inverse_metric_jet(mj)
    d2G = -(_es("...aip,...ijm,...jb->...abmp", dG, dg, G)
            + _es("...ai,...ijmp,...jb->...abmp", G, d2g, G)
            + _es("...ai,...ijm,...jbp->...abmp", G, dg, dG))

    # first-kind symbols and their partials; derivative axes trail
    G1 = 0.5 * (_es("...lji->...lij", dg) + dg - _es("...ijl->...lij", dg))
    dG1 = 0.5 * (_es("...ljim->...lijm", d2g) + d2g - _es("...ijlm->...lijm", d2g))
    d2G1 = 0.5 * (_es("...ljimp->...lijmp", d3g) + d3g - _es("...ijlmp->...lijmp", d3g))

    gam = _es("...kl,...lij->...kij", G, G1)
    dgam = _es("...klm,...lij->...kijm", dG, G1) + _es("...kl,...lijm->...kijm", G, dG1)
    d2gam = (_es("...klmp,...lij->...kijmp", d2G, G1)
             + _es("...klm,...lijp->...kijmp", dG, dG1)
             + _es("...klp,...lijm->...kijmp", dG, dG1)
             + _es("...kl,...lijmp->...kijmp", G, d2G1))

    # Rup[p, l, i, j]
    quad = _es("...piq,...qjl->...plij", gam, gam)
    rup = (_es("...pjli->...plij", dgam) - _es("...pilj->...plij", dgam)
           + quad - np.swapaxes(quad, -1, -2))
    dquad = (_es("...piqm,...qjl->...plijm", dgam, gam)
             + _es("...piq,...qjlm->...plijm", gam, dgam))
    drup = (_es("...pjlim->...plijm", d2gam) - _es("...piljm->...plijm", d2gam)
            + dquad - np.swapaxes(dquad, -2, -3))

    riemann = _es("...kp,...plij->...ijkl", g, rup)
    ricci = _es("...pkpi->...ik", rup)
    ricci = 0.5 * (ricci + np.swapaxes(ricci, -1, -2))
    dricci = _es("...pkpim->...ikm", drup)
    dricci = 0.5 * (dricci + np.swapaxes(dricci, -2, -3))
    scalar = _es("...ik,...ik->...", G, ricci)
    grad_scalar = _es("...ikm,...ik->...m", dG, ricci) + _es("...ik,...ikm->...m", G, dricci)
    grad_ricci = (dricci - _es("...pki,...pj->...ijk", gam, ricci)
                  - _es("...pkj,...ip->...ijk", gam, ricci))
    weyl = weyl_from(riemann, ricci, scalar, g)
    return CurvaturePack(g=g, ginv=G, dginv=dG, gamma=gam, dgamma=dgam, riemann=riemann,
                         ricci=ricci, scalar=scalar, grad_scalar=grad_scalar, weyl=weyl,
                         grad_ricci=grad_ricci)


def covariant_hessian(sj: ScalarJet3, cp: CurvaturePack) -> np.ndarray:
    """f_ij = d_i d_j f - G^k_ij d_k f."""
    h = sj.hess - _es("...kij,...k->...ij", cp.gamma, sj.grad)
    return 0.5 * (h + np.swapaxes(h, -1, -2))


def third_covariant_scalar(sj: ScalarJet3, cp: CurvaturePack) -> np.ndarray:
    """Covariant third derivative ``T[k, j, i] = f_kji`` (derivative of f_kj along i)."""
    hess = covariant_hessian(sj, cp)
    gam = cp.gamma
    # d_i of the covariant Hessian f_kj
    d_hess = (sj.third - _es("...pkji,...p->...kji", cp.dgamma, sj.grad)
              - _es("...pkj,...pi->...kji", gam, sj.hess))
    return (d_hess - _es("...pik,...pj->...kji", gam, hess)
            - _es("...pij,...kp->...kji", gam, hess))


def raise_index(cp: CurvaturePack, covector: np.ndarray) -> np.ndarray:
    return _es("...ij,...j->...i", cp.ginv, covector)


def sectional_curvature(cp: CurvaturePack, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """K(u, v) = R(u, v, u, v) / (|u|^2 |v|^2 - <u, v>^2)."""
    num = _es("...ijkl,...i,...j,...k,...l->...", cp.riemann, u, v, u, v)
    uu = _es("...ij,...i,...j->...", cp.g, u, u)
    vv = _es("...ij,...i,...j->...", cp.g, v, v)
    uv = _es("...ij,...i,...j->...", cp.g, u, v)
    return num / (uu * vv - uv * uv)
