#include <doctest.h>

#include "qoslab/serialize.hpp"

using namespace qoslab;

TEST_CASE("exponent parsing") {
    CHECK(parse_exponent("2").value() == 2.0);
    CHECK(parse_exponent("4/3").value() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(parse_exponent("inf").is_inf());
    CHECK(exponent_str(Exponent::inf()) == "inf");
    CHECK(parse_exponent(exponent_str(Exponent(4.0 / 3.0))).value() == 4.0 / 3.0);
    CHECK_THROWS_AS(parse_exponent("spam"), std::invalid_argument);
}

TEST_CASE("space desc parsing") {
    CHECK(parse_space_desc("scalar").kind == SpaceDescKind::Scalar);
    VectorSpaceDesc l12 = parse_space_desc("l1:2");
    CHECK(l12.kind == SpaceDescKind::Lq);
    CHECK(l12.q.value() == 1.0);
    CHECK(l12.m == 2);
    VectorSpaceDesc s23 = parse_space_desc("s2:3");
    CHECK(s23.kind == SpaceDescKind::Schatten);
    CHECK(s23.m == 3);
    CHECK(parse_space_desc(space_desc_str(l12)) == l12);
    CHECK(parse_space_desc("linf:4").q.is_inf());
    CHECK_THROWS_AS(parse_space_desc("x3:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_space_desc("l2"), std::invalid_argument);
}

TEST_CASE("shorthand builders") {
    QSystemInstance s3 = build_system_from_spec("s3-dual", 1);
    CHECK(s3.kind_tag == "s3-dual");
    CHECK(s3.params.dims == std::vector<int>{1, 1, 2});

    QSystemInstance rad = build_system_from_spec("rademacher:dims=1x8,n=50000", 7);
    CHECK(rad.params.count() == 8);
    CHECK(rad.space->size() == 50000);
    CHECK(rad.exactly_orthonormal);

    QSystemInstance gau = build_system_from_spec("gaussian:d=1,n=100000", 7);
    CHECK(gau.params.dims == std::vector<int>{1});
    CHECK(gau.space->size() == 100000);

    QSystemInstance mix = build_system_from_spec("steinhaus:dims=1,2x2,3,n=2000", 7);
    CHECK(mix.params.dims == std::vector<int>{1, 2, 2, 3});

    QSystemInstance wb = build_system_from_spec("walsh-blocked:dims=1,1,2", 0);
    CHECK(wb.params.dims == std::vector<int>{1, 1, 2});
    // needs 1 + 1 + 4 = 6 base functions, so 2^3 cells by default
    CHECK(wb.blocked_levels == 3);
    QSystemInstance tb = build_system_from_spec("trig-blocked:dims=1x4,levels=6", 0);
    CHECK(tb.blocked_levels == 6);
    CHECK(tb.space->size() == 64);

    QSystemInstance su2 = build_system_from_spec("su2:jmax=3/2,n=1000", 3);
    CHECK(su2.params.dims == std::vector<int>{1, 2, 3, 4});

    CHECK_THROWS_AS(build_system_from_spec("pentagon", 0), std::invalid_argument);
    CHECK_THROWS_AS(build_system_from_spec("rademacher:n=1000", 0), std::invalid_argument);
    CHECK_THROWS_AS(build_system_from_spec("rademacher:dims=0x3,n=1000", 0),
                    std::invalid_argument);
}

TEST_CASE("seeds separate monte carlo draws") {
    QSystemInstance a = build_system_from_spec("steinhaus:dims=2,n=1000", 11);
    QSystemInstance b = build_system_from_spec("steinhaus:dims=2,n=1000", 12);
    CHECK(a.phi(0, 0) != b.phi(0, 0));
}

TEST_CASE("system json round trip") {
    SUBCASE("exact finite is bit identical") {
        for (const char* spec : {"q8-dual", "z16-dual", "trig-blocked:dims=1,1,2,levels=5"}) {
            QSystemInstance sys = build_system_from_spec(spec, 0);
            QSystemInstance back = system_from_json(system_to_json(sys));
            REQUIRE(back.params.dims == sys.params.dims);
            REQUIRE(back.space->size() == sys.space->size());
            for (std::size_t s = 0; s < sys.params.count(); ++s)
                for (std::size_t pt = 0; pt < sys.space->size(); ++pt)
                    CHECK(back.phi(s, pt) == sys.phi(s, pt));
        }
    }
    SUBCASE("sampled systems reproduce from the stored seed") {
        for (const char* spec :
             {"rademacher:dims=1x4,n=2000", "gaussian:dims=2,3,n=1500", "su2:jmax=1,n=1200"}) {
            QSystemInstance sys = build_system_from_spec(spec, 42, 5);
            Json j = system_to_json(sys);
            CHECK(j.at("space").at("seed").get<std::uint64_t>() == 42);
            QSystemInstance back = system_from_json(j);
            CHECK(back.kind_tag == sys.kind_tag);
            for (std::size_t s = 0; s < sys.params.count(); ++s)
                for (std::size_t pt : {std::size_t(0), sys.space->size() - 1})
                    CHECK(back.phi(s, pt) == sys.phi(s, pt));
        }
    }
}

TEST_CASE("coeff json round trip") {
    QSystemInstance sys = build_system_from_spec("s3-dual", 0);
    CoeffFamily a = CoeffFamily::zero(sys.params, parse_space_desc("l1:2"));
    RngStream rng(9);
    for (auto& per_coord : a.blocks)
        for (auto& m : per_coord)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    m(i, c) = Complex(rng.gaussian(), rng.gaussian());
    CoeffFamily back = coeffs_from_json(coeffs_to_json(a), sys.params);
    CHECK(back.desc == a.desc);
    for (std::size_t s = 0; s < a.params.count(); ++s)
        for (std::size_t e = 0; e < a.blocks[s].size(); ++e)
            CHECK(back.blocks[s][e] == a.blocks[s][e]);
}

TEST_CASE("report json and csv") {
    CltReport rep;
    rep.dims = {2};
    rep.h = "s2sq";
    rep.rows.push_back({1, 2.0000000000000004, 0.001, 2.0, 0.002});
    rep.reference = 1.9999999999999998;
    rep.reference_stderr = 0.0005;
    Json j = to_json(rep);
    CHECK(j.at("rows").size() == 1);
    CHECK(j.at("rows").at(0).at("m").get<int>() == 1);

    std::string csv = clt_to_csv(rep);
    CHECK(csv.substr(0, csv.find('\n')) == "m,estimate,stderr,reference,reference_stderr");
    CHECK(csv.find("1,2.0000000000000004,0.001,1.9999999999999998,0.00050000000000000001\n") !=
          std::string::npos);

    // doubles survive the decimal detour
    for (double v : {1.0 / 3.0, 2.0000000000000004, -1e-17, 0.1}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
