#include "fene/micromacro.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fene {

namespace {

// row p of a Q x M^2 matrix viewed as an M x M field, flat index n = i + M*j
using RowMap = Eigen::Map<const Eigen::ArrayXXd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
RowMap row_as_grid(const Eigen::MatrixXd& mat, int p, int m) {
    return RowMap(mat.data() + p, m, m, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(mat.rows() * m, mat.rows()));
}

Eigen::ArrayXd grid_to_flat(const PhysicalField& f) {
    return Eigen::Map<const Eigen::ArrayXd>(f.data(), f.size());
}

void scatter_row(Eigen::MatrixXcd& mat, int p, const SpectralField& f) {
    const int m = static_cast<int>(f.rows());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            mat(p, i + m * j) = f(i, j);
}

SpectralField gather_row(const Eigen::MatrixXcd& mat, int p, int m) {
    SpectralField f(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            f(i, j) = mat(p, i + m * j);
    return f;
}

} // namespace

CoefficientField CoefficientField::zero(int q, const TorusGrid& g) {
    CoefficientField c;
    c.phys = Eigen::MatrixXd::Zero(q, g.m() * g.m());
    c.spec = Eigen::MatrixXcd::Zero(q, g.m() * g.m());
    return c;
}

void CoefficientField::sync_phys_from_spec(const TorusGrid& g) {
    const int m = g.m();
    PhysicalField buf;
    for (int p = 0; p < q(); ++p) {
        g.backward(gather_row(spec, p, m), buf);
        phys.row(p) = grid_to_flat(buf).matrix().transpose();
    }
}

void CoefficientField::sync_spec_from_phys(const TorusGrid& g) {
    const int m = g.m();
    SpectralField buf;
    for (int p = 0; p < q(); ++p) {
        g.forward(row_as_grid(phys, p, m), buf);
        scatter_row(spec, p, buf);
    }
}

MicroMacroState MicroMacroState::zero(int q, const TorusGrid& g) {
    MicroMacroState s;
    s.u = VectorField::zero(g);
    s.c = CoefficientField::zero(q, g);
    return s;
}

VelocityGradient velocity_gradient(const TorusGrid& g, const VectorField& u) {
    VelocityGradient vg;
    g.backward(u.c1, vg.u1);
    g.backward(u.c2, vg.u2);
    SpectralField tmp;
    const std::array<const SpectralField*, 2> uc = {&u.c1, &u.c2};
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
            spectral_derivative(g, *uc[i], j, 1, tmp);
            g.backward(tmp, vg.d[j][i]);
        }
    return vg;
}

StressField compute_stress_field(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops) {
    const int m = g.m();
    StressField tau;
    const auto assemble = [&](const Eigen::VectorXd& tv, PhysicalField& phys, SpectralField& spec) {
        const Eigen::RowVectorXd flat = tv.transpose() * state.c.phys;
        phys = Eigen::Map<const Eigen::ArrayXXd>(flat.data(), m, m);
        g.forward(phys, spec);
    };
    assemble(ops.stress[0][0], tau.p11, tau.s11);
    assemble(ops.stress[0][1], tau.p12, tau.s12);
    assemble(ops.stress[1][1], tau.p22, tau.s22);
    return tau;
}

VectorField rhs_velocity(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                         const RhsOptions& opt) {
    return rhs_velocity(g, state, ops, opt, velocity_gradient(g, state.u));
}

VectorField rhs_velocity(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                         const RhsOptions& opt, const VelocityGradient& vg) {
    VectorField out = VectorField::zero(g);

    const StressField tau = compute_stress_field(g, state, ops);
    SpectralField d1, d2;
    spectral_derivative(g, tau.s11, 0, 1, d1);
    spectral_derivative(g, tau.s12, 1, 1, d2);
    out.c1 = d1 + d2;
    spectral_derivative(g, tau.s12, 0, 1, d1);
    spectral_derivative(g, tau.s22, 1, 1, d2);
    out.c2 = d1 + d2;

    if (opt.advection) {
        // u . grad u from the precomputed gradient fields
        SpectralField adv;
        g.forward(vg.u1 * vg.d[0][0] + vg.u2 * vg.d[1][0], adv);
        g.dealias(adv);
        out.c1 -= adv;
        g.forward(vg.u1 * vg.d[0][1] + vg.u2 * vg.d[1][1], adv);
        g.dealias(adv);
        out.c2 -= adv;
    }

    leray_project(g, out);
    out.c1(0, 0) = 0.0;
    out.c2(0, 0) = 0.0;
    g.dealias(out.c1);
    g.dealias(out.c2);
    return out;
}

Eigen::MatrixXcd explicit_distribution_tendency(const TorusGrid& g, const MicroMacroState& state,
                                                const BallOperators& ops, const RhsOptions& opt) {
    return explicit_distribution_tendency(g, state, ops, opt, velocity_gradient(g, state.u));
}

Eigen::MatrixXcd explicit_distribution_tendency(const TorusGrid& g, const MicroMacroState& state,
                                                const BallOperators& ops, const RhsOptions& opt,
                                                const VelocityGradient& vg) {
    const int m = g.m();
    const int q = state.c.q();

    // drag in physical space: sum_ij (d_j u_i)(D[i][j] c + b[i][j])
    Eigen::MatrixXd expl = Eigen::MatrixXd::Zero(q, m * m);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Eigen::MatrixXd w = ops.drag[i][j] * state.c.phys;
            if (!opt.psi_drag) w.setZero();
            w.colwise() += ops.drag_src[i][j];
            const Eigen::ArrayXd gradflat = grid_to_flat(vg.d[j][i]);
            expl += (w.array().rowwise() * gradflat.transpose()).matrix();
        }

    Eigen::MatrixXcd out(q, m * m);
    SpectralField buf, df;
    PhysicalField cx;
    const Eigen::ArrayXd u1f = grid_to_flat(vg.u1), u2f = grid_to_flat(vg.u2);
    for (int p = 0; p < q; ++p) {
        if (opt.advection) {
            const SpectralField cp = gather_row(state.c.spec, p, m);
            spectral_derivative(g, cp, 0, 1, df);
            g.backward(df, cx);
            expl.row(p).array() -= u1f.transpose() * grid_to_flat(cx).transpose();
            spectral_derivative(g, cp, 1, 1, df);
            g.backward(df, cx);
            expl.row(p).array() -= u2f.transpose() * grid_to_flat(cx).transpose();
        }
        g.forward(row_as_grid(expl, p, m), buf);
        g.dealias(buf);
        scatter_row(out, p, buf);
    }
    return out;
}

Eigen::MatrixXcd rhs_distribution(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                                  const FeneParams& params, const RhsOptions& opt) {
    Eigen::MatrixXcd out = explicit_distribution_tendency(g, state, ops, opt);
    out -= ops.S * state.c.spec;
    const Eigen::ArrayXd lam = Eigen::Map<const Eigen::ArrayXd>(g.xi_sq().data(), g.xi_sq().size());
    out -= (params.nu * (state.c.spec.array().rowwise() * lam.transpose().cast<Complex>())).matrix();
    return out;
}

namespace {

// the three independent second-moment fields M_jk(x) = sum_q m2[j][k]_q c_q(x)
struct MomentFields {
    PhysicalField m11, m12, m22;
    SpectralField s11, s12, s22;
};

MomentFields moment_fields(const TorusGrid& g, const Eigen::MatrixXd& cphys, const BallOperators& ops) {
    const int m = g.m();
    MomentFields out;
    const auto mk = [&](const Eigen::VectorXd& v, PhysicalField& phys, SpectralField& spec) {
        const Eigen::RowVectorXd flat = v.transpose() * cphys;
        phys = Eigen::Map<const Eigen::ArrayXXd>(flat.data(), m, m);
        g.forward(phys, spec);
    };
    mk(ops.moment2[0][0], out.m11, out.s11);
    mk(ops.moment2[0][1], out.m12, out.s12);
    mk(ops.moment2[1][1], out.m22, out.s22);
    return out;
}

} // namespace

namespace {

DuReconstruction du_moment_eval(const TorusGrid& g, const Eigen::MatrixXd& cmid, const Eigen::MatrixXd& crate,
                                const VectorField& umid, const BallOperators& ops, const FeneParams& params,
                                const RhsOptions& opt) {
    const int m = g.m();
    const MomentFields mom = moment_fields(g, cmid, ops);
    const MomentFields rate = moment_fields(g, crate, ops);
    const VelocityGradient vg = velocity_gradient(g, umid);

    const std::array<const SpectralField*, 3> moms = {&mom.s11, &mom.s12, &mom.s22};
    const std::array<const PhysicalField*, 3> ratep = {&rate.m11, &rate.m12, &rate.m22};
    const std::array<std::pair<int, int>, 3> jk = {{{0, 0}, {0, 1}, {1, 1}}};

    // lookup M_{ab} among the three stored components
    const auto mfield = [&](int a, int b) -> const PhysicalField& {
        if (a > b) std::swap(a, b);
        return (a == 0 && b == 0) ? mom.m11 : (a == 0 && b == 1) ? mom.m12 : mom.m22;
    };

    DuReconstruction out;
    std::array<PhysicalField*, 3> recon = {&out.r11, &out.r12, &out.r22};

    double acc = 0.0, accref = 0.0;
    SpectralField tmp;
    PhysicalField work, ref;
    for (int comp = 0; comp < 3; ++comp) {
        const auto [j, kk] = jk[comp];
        work = PhysicalField::Zero(m, m);
        // advection moment
        if (opt.advection) {
            advect(g, vg.u1, vg.u2, *moms[comp], tmp);
            g.backward(tmp, work);
        }
        // d_t moment
        work += *ratep[comp];
        // - nu * laplacian moment
        spectral_derivative(g, *moms[comp], 0, 2, tmp);
        g.backward(tmp, ref);
        work -= params.nu * ref;
        // relaxation moment through S applied to the quadratic monomial
        {
            const Eigen::RowVectorXd flat = ops.stiff_moment2[j][kk].transpose() * cmid;
            work += Eigen::Map<const Eigen::ArrayXXd>(flat.data(), m, m);
        }
        // psi-drag moment, dealiased exactly as the tendency it mirrors
        if (opt.psi_drag) {
            PhysicalField dragmom = PhysicalField::Zero(m, m);
            for (int b = 0; b < 2; ++b)
                dragmom += vg.d[b][j] * mfield(b, kk) + vg.d[b][kk] * mfield(b, j);
            g.forward(dragmom, tmp);
            g.dealias(tmp);
            g.backward(tmp, dragmom);
            work -= dragmom;
        }

        *recon[comp] = work;

        // reference Ccoef * [Du]_{jk} of the midpoint velocity
        ref = 0.5 * params.Ccoef * (vg.d[kk][j] + vg.d[j][kk]);
        const double wgt = (comp == 1) ? 2.0 : 1.0; // off-diagonal appears twice in the tensor norm
        acc += wgt * (work - ref).square().sum();
        accref += wgt * ref.square().sum();
    }
    const double n = double(m) * double(m);
    out.residual_rms = std::sqrt(acc / n);
    out.reference_rms = std::sqrt(accref / n);
    return out;
}

} // namespace

DuReconstruction reconstruct_du(const TorusGrid& g, const MicroMacroState& prev, const MicroMacroState& next,
                                const BallOperators& ops, const FeneParams& params, const RhsOptions& opt) {
    const double dt = next.t - prev.t;
    if (!(dt > 0.0))
        throw std::invalid_argument("reconstruct_du: states must be one positive step apart");
    const Eigen::MatrixXd cmid = 0.5 * (prev.c.phys + next.c.phys);
    const Eigen::MatrixXd crate = (next.c.phys - prev.c.phys) / dt;
    VectorField umid;
    umid.c1 = 0.5 * (prev.u.c1 + next.u.c1);
    umid.c2 = 0.5 * (prev.u.c2 + next.u.c2);
    return du_moment_eval(g, cmid, crate, umid, ops, params, opt);
}

double du_identity_residual(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                            const FeneParams& params, const RhsOptions& opt) {
    const Eigen::MatrixXcd rhs = rhs_distribution(g, state, ops, params, opt);
    const int m = g.m();
    Eigen::MatrixXd crate(state.c.q(), m * m);
    PhysicalField buf;
    for (int p = 0; p < state.c.q(); ++p) {
        g.backward(gather_row(rhs, p, m), buf);
        crate.row(p) = Eigen::Map<const Eigen::ArrayXd>(buf.data(), buf.size()).matrix().transpose();
    }
    return du_moment_eval(g, state.c.phys, crate, state.u, ops, params, opt).residual_rms;
}

double coupling_cancellation_residual(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops) {
    const VelocityGradient vg = velocity_gradient(g, state.u);
    const StressField tau = compute_stress_field(g, state, ops);

    // <equilibrium drag, psi>: sum_x sum_ij d_j u_i(x) (b[i][j] . c(x))
    double pairing1 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Eigen::RowVectorXd bc = ops.drag_src[i][j].transpose() * state.c.phys;
            const Eigen::ArrayXXd bgrid = Eigen::Map<const Eigen::ArrayXXd>(bc.data(), g.m(), g.m());
            pairing1 += (grid_to_flat(vg.d[j][i]) * grid_to_flat(bgrid)).sum();
        }
    pairing1 *= g.cell_area();

    // <div tau, u>
    SpectralField d1, d2;
    PhysicalField f1, f2;
    spectral_derivative(g, tau.s11, 0, 1, d1);
    spectral_derivative(g, tau.s12, 1, 1, d2);
    SpectralField div1 = d1 + d2;
    spectral_derivative(g, tau.s12, 0, 1, d1);
    spectral_derivative(g, tau.s22, 1, 1, d2);
    SpectralField div2 = d1 + d2;
    g.backward(div1, f1);
    g.backward(div2, f2);
    const double pairing2 = ((f1 * vg.u1).sum() + (f2 * vg.u2).sum()) * g.cell_area();

    return std::abs(pairing1 + pairing2);
}

double closure_identity_residual(const TorusGrid& g, const VectorField& u, const BallOperators& ops,
                                 const FeneParams& params) {
    const VelocityGradient vg = velocity_gradient(g, u);
    VectorField force = VectorField::zero(g);

    std::array<std::array<SpectralField, 2>, 2> sig;
    for (int l = 0; l < 2; ++l)
        for (int mm = l; mm < 2; ++mm) {
            PhysicalField s = PhysicalField::Zero(g.m(), g.m());
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    s += ops.closure[l][mm][i][j] * vg.d[j][i];
            g.forward(s, sig[l][mm]);
            if (mm != l) sig[mm][l] = sig[l][mm];
        }

    SpectralField d1, d2;
    spectral_derivative(g, sig[0][0], 0, 1, d1);
    spectral_derivative(g, sig[0][1], 1, 1, d2);
    force.c1 = d1 + d2;
    spectral_derivative(g, sig[1][0], 0, 1, d1);
    spectral_derivative(g, sig[1][1], 1, 1, d2);
    force.c2 = d1 + d2;
    leray_project(g, force);

    const SpectralField ref1 = -params.c2 * (u.c1 * g.xi_sq().cast<Complex>());
    const SpectralField ref2 = -params.c2 * (u.c2 * g.xi_sq().cast<Complex>());
    const double diff = std::sqrt((force.c1 - ref1).abs2().sum() + (force.c2 - ref2).abs2().sum());
    const double refn = std::sqrt(ref1.abs2().sum() + ref2.abs2().sum());
    return refn > 0.0 ? diff / refn : diff;
}

double closure_effective_constant(const BallOperators& ops) {
    return ops.stress[0][1].dot(ops.drag_src[1][0]);
}

} // namespace fene
