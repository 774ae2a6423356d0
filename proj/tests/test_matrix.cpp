#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "curveaut/catalog.hpp"
#include "curveaut/matrix.hpp"

using namespace curveaut;

namespace {

Cyclo random_element(const FieldPtr& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> coords;
    for (unsigned i = 0; i < f->degree(); ++i) coords.emplace_back(num(rng), den(rng));
    return Cyclo::from_coords(f, coords);
}

Mat random_invertible(const FieldPtr& f, unsigned dim, std::mt19937_64& rng) {
    for (;;) {
        std::vector<Cyclo> e;
        for (unsigned i = 0; i < dim * dim; ++i) e.push_back(random_element(f, rng));
        Mat m(dim, f, std::move(e));
        if (!m.det().is_zero()) return m;
    }
}

WordCheck run_word(std::vector<std::pair<Mat, long>> word, const Mat& target,
                   Mode mode = Mode::Linear) {
    return check_word_identity(std::span<const std::pair<Mat, long>>(word), target, mode);
}

} // namespace

TEST_CASE("basic matrix operations") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);
    const Mat sigma = cat.matrix("sigma");
    const Mat I3 = Mat::identity(f, 3);

    SECTION("identity is neutral") {
        CHECK(I3 * sigma == sigma);
        CHECK(sigma * I3 == sigma);
    }
    SECTION("det diag(zeta5^3, zeta5^2, 1) = 1") {
        const Mat rho = cat.matrix("rho_matrix");
        CHECK(rho.det() == Cyclo::one(f));
    }
    SECTION("beta^2 = -I") {
        const Mat beta = cat.matrix("beta");
        CHECK(beta * beta == Mat::identity(f, 2).scalar_mul(-Cyclo::one(f)));
    }
    SECTION("inverse contract on random matrices") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 8; ++t) {
            const Mat a = random_invertible(f, 3, rng);
            CHECK(a * a.inverse() == I3);
            CHECK(a.inverse() * a == I3);
        }
    }
    SECTION("singular inverse is an error") {
        std::vector<Cyclo> z(4, Cyclo::zero(f));
        CHECK_THROWS_AS(Mat(2, f, z).inverse(), SingularError);
    }
}

TEST_CASE("projective canonicalization") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);
    const Cyclo z5 = Cyclo::root_of_unity(f, 1);

    SECTION("scalars collapse to the identity") {
        const Mat s = Mat::identity(f, 3).scalar_mul(Cyclo::rational(f, Rational(-7, 3)));
        CHECK(projective_canonical(s) == Mat::identity(f, 3));
    }
    SECTION("2A and A agree") {
        const Mat sigma = cat.matrix("sigma");
        CHECK(projective_canonical(sigma.scalar_mul(Cyclo::integer(f, 2))) ==
              projective_canonical(sigma));
    }
    SECTION("diag(zeta5, zeta5, 1) canonicalizes to diag(1, 1, zeta5^4)") {
        const Mat d = Mat::diagonal(f, {z5, z5, Cyclo::one(f)});
        const Mat expect = Mat::diagonal(f, {Cyclo::one(f), Cyclo::one(f), Cyclo::root_of_unity(f, 4)});
        CHECK(projective_canonical(d) == expect);
    }
    SECTION("idempotent and scalar-invariant on random inputs") {
        std::mt19937_64 rng(99);
        for (int t = 0; t < 50; ++t) {
            const Mat a = random_invertible(f, 3, rng);
            Cyclo c = random_element(f, rng);
            while (c.is_zero()) c = random_element(f, rng);
            const Mat ca = projective_canonical(a);
            CHECK(projective_canonical(ca) == ca);
            CHECK(projective_canonical(a.scalar_mul(c)) == ca);
        }
    }
    SECTION("zero matrix cannot be canonicalized") {
        std::vector<Cyclo> z(9, Cyclo::zero(f));
        CHECK_THROWS_AS(projective_canonical(Mat(3, f, z)), SingularError);
    }
}

TEST_CASE("block embedding and restriction") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);

    SECTION("identity embeds to identity") {
        CHECK(block_embed(Mat::identity(f, 2)) == Mat::identity(f, 3));
    }
    SECTION("alpha goes to alpha_prime") {
        CHECK(block_embed(cat.matrix("alpha")) == cat.matrix("alpha_prime"));
    }
    SECTION("block_embed is multiplicative") {
        const Mat b = cat.matrix("beta"), g = cat.matrix("gamma");
        CHECK(block_embed(b * g) == cat.matrix("beta_prime") * cat.matrix("gamma_prime"));
    }
    SECTION("restriction inverts embedding on classes") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 10; ++t) {
            const Mat a = random_invertible(f, 2, rng);
            const ProjectiveMatrix r = pbd_restrict(ProjectiveMatrix(block_embed(a)));
            CHECK(r == ProjectiveMatrix(a));
        }
    }
    SECTION("lambda restricts to the trivial class") {
        const Mat lam = cat.matrix("lambda", 30);
        CHECK(pbd_restrict(ProjectiveMatrix(lam)).rep() == Mat::identity(lam.field(), 2));
    }
    SECTION("sigma restricts to its canonical upper block") {
        const Mat sigma = cat.matrix("sigma");
        const ProjectiveMatrix r = pbd_restrict(ProjectiveMatrix(sigma));
        std::vector<Cyclo> blk{sigma.at(0, 0), sigma.at(0, 1), sigma.at(1, 0), sigma.at(1, 1)};
        CHECK(r.rep() == projective_canonical(Mat(2, f, blk)));
    }
    SECTION("non-PBD shapes are rejected") {
        std::mt19937_64 rng(8);
        Mat a = random_invertible(f, 3, rng);
        while (a.is_pbd_shape()) a = random_invertible(f, 3, rng);
        CHECK_THROWS_AS(pbd_restrict(ProjectiveMatrix(a)), ShapeError);
    }
}

TEST_CASE("generator catalog is exact") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);
    const Cyclo one = Cyclo::one(f);
    auto z5 = [&](long k) { return Cyclo::root_of_unity(f, k); };

    SECTION("lambda(30) = diag(1, 1, zeta30)") {
        const Mat lam = cat.matrix("lambda(30)");
        FieldPtr f30 = lam.field();
        CHECK(f30->conductor() == 30);
        CHECK(lam == Mat::diagonal(f30, {Cyclo::one(f30), Cyclo::one(f30),
                                         Cyclo::root_of_unity(f30, 1)}));
    }
    SECTION("tau = diag(zeta5, 1, 1)") {
        CHECK(cat.matrix("tau") == Mat::diagonal(f, {z5(1), one, one}));
    }
    SECTION("gamma matches its closed form: (zeta5^2 - zeta5^3) gamma = [[p,1],[1,-p]]") {
        const Mat gamma = cat.matrix("gamma");
        const Cyclo w = z5(2) - z5(3);
        const Cyclo p = z5(1) + z5(4);
        CHECK(gamma.scalar_mul(w) == Mat(2, f, {p, one, one, -p}));
    }
    SECTION("sigma entries carry 1/sqrt(5)") {
        const Mat sigma = cat.matrix("sigma");
        const Cyclo s5 = Cyclo::sqrt_five(f);
        CHECK(sigma.at(0, 0) * s5 == z5(1) - z5(4));
        CHECK(sigma.at(0, 1) * s5 == z5(3) - z5(2));
        CHECK(sigma.at(1, 0) == sigma.at(0, 1));
        CHECK(sigma.at(1, 1) == -sigma.at(0, 0));
        CHECK(sigma.at(2, 2) == one);
    }
    SECTION("phi = diag(zeta5, 1, zeta60)") {
        const Mat phi = cat.matrix("phi");
        FieldPtr f60 = phi.field();
        CHECK(f60->conductor() == 60);
        CHECK(phi == Mat::diagonal(f60, {Cyclo::root_of_unity(f60, 12), Cyclo::one(f60),
                                         Cyclo::root_of_unity(f60, 1)}));
        CHECK(phi.at(2, 2).pow(12) == Cyclo::root_of_unity(f60, 12));  // xi^12 = zeta5
    }
    SECTION("alpha, beta, gamma lie in SL(2)") {
        for (const char* n : {"alpha", "beta", "gamma"}) {
            CHECK(cat.matrix(n).det() == one);
        }
    }
    SECTION("the 2x2 icosahedral set is over Q(zeta5)") {
        const GeneratorSet s = cat.generators("icosahedral_2x2");
        CHECK(s.field->conductor() == 5);
        CHECK(s.matrices.size() == 3);
    }
    SECTION("C(d) deck sets live over the least common conductor") {
        const GeneratorSet s = cat.generators("C(5)_galois");
        CHECK(s.field->conductor() == 20);
        CHECK(s.matrices.size() == 2);
    }
    SECTION("unknown names are rejected") {
        CHECK_THROWS_AS(cat.matrix("does_not_exist"), BadArgumentError);
        CHECK_THROWS_AS(cat.generators("does_not_exist"), BadArgumentError);
    }
    SECTION("opposite sqrt(5) branch flips sigma's block sign") {
        Catalog minus(CatalogOptions{Sqrt5Branch::NegGaussSum, kDefaultConductorCap, ""});
        const Mat a = cat.matrix("sigma"), b = minus.matrix("sigma");
        CHECK(b.at(0, 0) == -a.at(0, 0));
        CHECK(b.at(2, 2) == a.at(2, 2));
    }
}

TEST_CASE("registered word identities hold exactly") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);
    const Cyclo one = Cyclo::one(f);
    auto z5 = [&](long k) { return Cyclo::root_of_unity(f, k); };
    const Mat sigma = cat.matrix("sigma");
    const Mat tau = cat.matrix("tau");
    const Mat rho = cat.matrix("rho_matrix");
    const Mat D = Mat::diagonal(f, {z5(1), z5(1), one});  // diag(zeta5, zeta5, 1)
    const Mat N = Mat::diagonal(f, {-one, -one, one});    // diag(-1, -1, 1)
    const Mat ap = cat.matrix("alpha_prime");
    const Mat bp = cat.matrix("beta_prime");
    const Mat gp = cat.matrix("gamma_prime");

    SECTION("(sigma tau^4)^3 = diag(zeta5, zeta5, 1)") {
        const Mat st4 = sigma * tau.pow(4);
        auto r = run_word({{st4, 3}}, D);
        CHECK(r.status == WordStatus::Exact);
        // the square genuinely differs, including projectively
        auto r2 = run_word({{st4, 2}}, D);
        CHECK(r2.status == WordStatus::Fail);
    }
    SECTION("rho = tau * diag(zeta5,zeta5,1)^2") {
        auto r = run_word({{tau, 1}, {D, 2}}, rho);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("alpha_prime = sigma^2 rho") {
        auto r = run_word({{sigma, 2}, {rho, 1}}, ap);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("gamma_prime = (rho^2 sigma rho)^2 rho") {
        const Mat core = rho.pow(2) * sigma * rho;
        auto r = run_word({{core, 2}, {rho, 1}}, gp);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("beta_prime = sigma (rho^2 sigma rho)^2 rho") {
        const Mat core = rho.pow(2) * sigma * rho;
        auto r = run_word({{sigma, 1}, {core, 2}, {rho, 1}}, bp);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("sigma = diag(-1,-1,1) beta_prime gamma_prime") {
        auto r = run_word({{N, 1}, {bp, 1}, {gp, 1}}, sigma);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("tau = diag(-1,-1,1) alpha_prime diag(zeta5,zeta5,1)^3") {
        auto r = run_word({{N, 1}, {ap, 1}, {D, 3}}, tau);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("beta_prime^2 = diag(-1,-1,1)") {
        auto r = run_word({{bp, 2}}, N);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("epsilon = (sigma phi^4)^3 = zeta5 I") {
        const Mat phi = cat.matrix("phi");
        FieldPtr f60 = phi.field();
        const Mat target = Mat::identity(f60, 3).scalar_mul(Cyclo::root_of_unity(f60, 12));
        auto r = run_word({{sigma.embed_field(f60) * phi.pow(4), 3}}, target);
        CHECK(r.status == WordStatus::Exact);
    }
    SECTION("the splitting involution squares to -I") {
        const Mat w = cat.matrix("split_involution");
        const Mat target = Mat::identity(w.field(), 3).scalar_mul(-Cyclo::one(w.field()));
        auto r = run_word({{w, 2}}, target);
        CHECK(r.status == WordStatus::Exact);
    }
}

TEST_CASE("word checks report scalars and residuals") {
    Catalog cat;
    FieldPtr f = CyclotomicField::get(5);
    const Mat tau = cat.matrix("tau");

    SECTION("a scalar discrepancy is measured, not hidden") {
        const Mat doubled = tau.scalar_mul(Cyclo::integer(f, 2));
        auto r = run_word({{tau, 1}}, doubled, Mode::Projective);
        REQUIRE(r.status == WordStatus::ProjectiveWithScalar);
        REQUIRE(r.scalar.has_value());
        CHECK(*r.scalar == Cyclo::rational(f, Rational(1, 2)));
    }
    SECTION("failures carry the residual") {
        const Mat sigma = cat.matrix("sigma");
        auto r = run_word({{sigma, 1}}, tau);
        REQUIRE(r.status == WordStatus::Fail);
        REQUIRE(r.residual.has_value());
        CHECK(*r.residual == sigma * tau.inverse());
    }
    SECTION("words may mix conductors; embedding is automatic") {
        const Mat phi = cat.matrix("phi");  // conductor 60
        const Mat lam = cat.matrix("lambda", 12);
        auto r = run_word({{phi, 1}, {phi, -1}, {lam, 0}},
                          Mat::identity(CyclotomicField::get(60), 3));
        CHECK(r.status == WordStatus::Exact);
    }
}

TEST_CASE("matrix JSON round trip") {
    Catalog cat;
    for (const char* n : {"sigma", "gamma", "split_involution"}) {
        const Mat m = cat.matrix(n);
        const Mat back = mat_from_json(to_json(m));
        CHECK(back == m);
        CHECK(back.key() == m.key());
    }
}

TEST_CASE("tampered catalog entries differ from the clean ones") {
    Catalog clean;
    for (const std::string& id : registered_tampers()) {
        Catalog bad(CatalogOptions{Sqrt5Branch::GaussSum, kDefaultConductorCap, id});
        bool differs = false;
        for (const char* fn : {"F30", "F20", "F12"}) {
            if (!(bad.binary_form(fn) == clean.binary_form(fn))) differs = true;
        }
        if (!(bad.matrix("sigma") == clean.matrix("sigma"))) differs = true;
        if (!(bad.matrix("lambda", 30) == clean.matrix("lambda", 30))) differs = true;
        CHECK(differs);
    }
    CHECK_THROWS_AS(Catalog(CatalogOptions{Sqrt5Branch::GaussSum, kDefaultConductorCap, "nope"}),
                    BadArgumentError);
}
