#include <doctest.h>

#include <cmath>

#include "v2xsec/model.hpp"
#include "v2xsec/rng.hpp"

using namespace v2xsec;

namespace {

NetworkParams baseline() {
    NetworkParams p;
    p.lambda_b = 1e-5;
    p.lambda_u = 1e-5;
    p.lambda_e = 1e-4;
    p.lambda_l = 5e-4;
    p.u_b = 1e-3;
    p.u_u = 1e-3;
    p.u_e = 1e-3;
    p.n_antennas = 2;
    p.phi = 0.6;
    p.alpha = 2.3;
    return p;
}

}  // namespace

TEST_CASE("db conversion") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(db_to_linear(-3.0103) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(linear_to_db(db_to_linear(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("derived constants match their definitions") {
    NetworkParams p = baseline();
    Thresholds t{10.0, 1.0};

    SUBCASE("symmetric receiver mixture gives kappa_p = 1/2") {
        p.lambda_u = p.u_u * p.lambda_l;
        const DerivedConstants d = derive_constants(p, t);
        CHECK(d.kappa_p == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(d.kappa_v == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("kappa for two antennas") {
        const DerivedConstants d = derive_constants(p, t);
        CHECK(d.kappa == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("secrecy argument at phi=1/2, beta=1, N=2") {
        p.phi = 0.5;
        const DerivedConstants d = derive_constants(p, t);
        CHECK(d.s_secrecy == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("rate split") {
        const DerivedConstants d = derive_constants(p, t);
        CHECK(d.r_b_rate == doctest::Approx(d.r_s_rate + d.r_e_rate).epsilon(1e-15));
        CHECK(d.r_s_rate > 0.0);
        CHECK(d.delta == doctest::Approx(2.0 / p.alpha));
    }
}

TEST_CASE("validation errors name the violated bound") {
    NetworkParams p = baseline();
    Thresholds t{10.0, 1.0};
    SUBCASE("antennas") {
        p.n_antennas = 1;
        CHECK_THROWS_WITH_AS(derive_constants(p, t),
                             "n_antennas must be >= 2 (the AN null space needs N-1 >= 1)",
                             ValidationError);
    }
    SUBCASE("phi") {
        p.phi = 1.5;
        CHECK_THROWS_AS(derive_constants(p, t), ValidationError);
        p.phi = 0.0;
        CHECK_THROWS_AS(derive_constants(p, t), ValidationError);
    }
    SUBCASE("alpha") {
        p.alpha = 2.0;
        CHECK_THROWS_AS(derive_constants(p, t), ValidationError);
    }
    SUBCASE("gamma") {
        t.gamma = 1.0;
        CHECK_THROWS_AS(derive_constants(p, t), ValidationError);
    }
    SUBCASE("gamma vs beta") {
        t.beta = 20.0;
        CHECK_THROWS_AS(derive_constants(p, t), ValidationError);
    }
}

TEST_CASE("mixing weights stay in [0,1] and sum to one") {
    Rng rng(42);
    Thresholds t{10.0, 1.0};
    for (int i = 0; i < 200; ++i) {
        NetworkParams p = baseline();
        p.lambda_u = rng.uniform() * 1e-3;
        p.u_u = rng.uniform() * 1e-2;
        p.lambda_b = rng.uniform() * 1e-3;
        p.u_b = rng.uniform() * 1e-2;
        p.lambda_l = rng.uniform() * 1e-2;
        p.n_antennas = 2 + static_cast<int>(rng.uniform() * 10);
        const DerivedConstants d = derive_constants(p, t);
        CHECK(d.kappa_p >= 0.0);
        CHECK(d.kappa_p <= 1.0);
        CHECK(d.rho_p >= 0.0);
        CHECK(d.rho_p <= 1.0);
        CHECK(std::fabs(d.kappa_p + d.kappa_v - 1.0) <= 1e-15);
        CHECK(std::fabs(d.rho_p + d.rho_v - 1.0) <= 1e-15);
    }
}

TEST_CASE("derive_constants is pure") {
    const NetworkParams p = baseline();
    const Thresholds t{10.0, 1.0};
    const DerivedConstants a = derive_constants(p, t);
    const DerivedConstants b = derive_constants(p, t);
    CHECK(a.kappa == b.kappa);
    CHECK(a.kappa_p == b.kappa_p);
    CHECK(a.s_secrecy == b.s_secrecy);
    CHECK(a.r_s_rate == b.r_s_rate);
}
