// Exact cocycle computations over SL(3,Z) x| Z^3.

#include <egamma/cocycle.hpp>

#include <cstdio>
#include <iostream>

using namespace egamma::cocycle;

namespace
{

void print(const char *title, const Report &rep)
{
    std::printf("%s\n", title);
    for (const auto &r : rep.records)
        std::printf("  %-7s %s%s%s\n", r.status.c_str(), r.name.c_str(), r.difference.empty() ? "" : "  ",
                    r.difference.c_str());
}

} // namespace

int main()
{
    std::printf("generators and their u\n");
    for (const auto &g : all_generators())
        std::cout << "  u(" << word(g).str() << ") = " << cocycle_u_poly(g).str() << "\n";

    const PresentationReport pres = verify_presentation();
    std::printf("\npresentation: %zu relations, %s\n", pres.checks.size(), pres.all_hold() ? "all hold" : "FAILURES");

    print("\nL tables", verify_L_tables());
    print("\npsi on relators", psi_relation_report());

    std::printf("\nc1 on translations\n");
    for (auto [a, b, c] : {std::array<Vec3, 3>{{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}},
                           std::array<Vec3, 3>{{{2, 0, 0}, {0, 0, 3}, {0, -1, 0}}},
                           std::array<Vec3, 3>{{{1, 2, 3}, {-1, 0, 2}, {3, 1, 1}}}})
        std::printf("  c1(%s, %s, %s) = %ld\n", to_string(a).c_str(), to_string(b).c_str(), to_string(c).c_str(),
                    chern_c1(translation(a), translation(b), translation(c)));

    print("\nD4 lifts", d4_lift_relations());
    std::printf("\nD4 obstruction = %s (mod 1/2)\n", d4_obstruction().get_str().c_str());
    return 0;
}
