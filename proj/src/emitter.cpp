#include "netepi/emitter.hpp"

#include "netepi/grounder.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace netepi {

std::string prolog_atom(std::string_view id)
{
    bool plain = !id.empty() && std::islower(static_cast<unsigned char>(id.front()));
    for (char c : id) {
        plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    }
    if (plain) {
        return std::string(id);
    }
    std::string quoted = "'";
    for (char c : id) {
        if (c == '\'' || c == '\\') quoted += '\\';
        quoted += c;
    }
    return quoted + "'";
}

namespace {

std::string quoted_path(std::string_view path)
{
    std::string out = "'";
    for (char c : path) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    return out + "'";
}

std::vector<PersonIndex> seed_indices(const ModelSpec& spec, const TemporalContactGraph& graph)
{
    std::vector<PersonIndex> seeds;
    if (const auto* count = std::get_if<std::size_t>(&spec.initial_infected)) {
        for (PersonIndex x = 0; x < *count && x < graph.size(); ++x) seeds.push_back(x);
    } else {
        for (const auto& id : std::get<std::vector<std::string>>(spec.initial_infected)) {
            if (auto x = graph.index_of(id)) seeds.push_back(*x);
        }
        std::sort(seeds.begin(), seeds.end());
        seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    }
    return seeds;
}

class Writer {
public:
    Writer(const ModelSpec& spec, const TemporalContactGraph& graph) : spec_(spec), graph_(graph) {}

    std::string relational()
    {
        const auto* people_file = std::get_if<PopulationFile>(&spec_.population_source);
        const auto* contacts_file = std::get_if<ContactsFile>(&spec_.contacts_source);
        if (people_file || contacts_file) {
            out_ << ":- use_module(library(db)).\n";
        }
        if (people_file) {
            out_ << ":- csv_load(" << quoted_path(people_file->path) << ",'person').\n";
        } else {
            for (const auto& id : graph_.individuals()) out_ << "person(" << prolog_atom(id) << ").\n";
        }
        if (contacts_file) {
            if (spec_.contacts_undirected) {
                out_ << ":- csv_load(" << quoted_path(contacts_file->path) << ",'contact_row').\n";
                out_ << "airborne_contact(X,Y,N) :- contact_row(X,Y,N).\n";
                out_ << "airborne_contact(X,Y,N) :- contact_row(Y,X,N).\n";
            } else {
                out_ << ":- csv_load(" << quoted_path(contacts_file->path) << ",'airborne_contact').\n";
            }
        } else {
            for (const ContactEvent& e : graph_.events()) {
                out_ << "airborne_contact(" << atom(e.target) << ',' << atom(e.source) << ',' << e.timestep
                     << ").\n";
            }
        }
        out_ << '\n';
        out_ << "time(N) :- between(1," << spec_.horizon << ",N).\n";
        for (PersonIndex x : seed_indices(spec_, graph_)) {
            out_ << pred(Compartment::Infected) << '(' << atom(x) << ",1).\n";
        }
        const std::string S = pred(Compartment::Susceptible);
        const std::string I = pred(Compartment::Infected);
        const std::string Rec = pred(Compartment::Recovered);
        const std::string Res = pred(Compartment::Resistant);

        out_ << S << "(X,N) :- time(N), person(X).\n";
        out_ << "\\+" << S << "(X,N) :- time(N), " << I << "(X,N).\n";
        out_ << prob(spec_.external_prob) << I << "(X,M) :- time(M), N is M-1, \\+" << I << "(X,N), " << S
             << "(X,N).\n";
        out_ << prob(spec_.transmission_prob) << I
             << "(X,M) :- time(M), N is M-1, airborne_contact(X,Y,N), " << S << "(X,N), " << I << "(Y,N).\n";
        out_ << persistence_prefix() << I << "(X,M) :- time(M), N is M-1, " << I << "(X,N).\n";
        if (spec_.infectious_period.bounded()) {
            out_ << "\\+" << I << "(X,M) :- time(M), N is M-" << spec_.infectious_period.count() << ", " << I
                 << "(X,N).\n";
        }
        out_ << "\\+" << S << "(X,N) :- time(N), " << Res << "(X,N).\n";
        out_ << Rec << "(X,M) :- time(M), N is M-1, " << I << "(X,N), \\+" << I << "(X,M).\n";
        out_ << prob(spec_.immunity_prob) << Res << "(X,N) :- time(N), " << Rec << "(X,N).\n";
        out_ << Res << "(X,M) :- time(M), N is M-1, " << Res << "(X,N).\n";
        if (spec_.immunity_period.bounded()) {
            out_ << "\\+" << Res << "(X,M) :- time(M), N is M-" << spec_.immunity_period.count() << ", " << Res
                 << "(X,N), " << Rec << "(X,N).\n";
        }
        out_ << '\n';
        for (Compartment c : spec_.queries) {
            out_ << "query(" << pred(c) << "(X,N)).\n";
        }
        return out_.str();
    }

    std::string grounded()
    {
        const GroundedModel model = ground(spec_, graph_);
        const std::string S = pred(Compartment::Susceptible);
        const std::string I = pred(Compartment::Infected);
        const std::string Rec = pred(Compartment::Recovered);
        const std::string Res = pred(Compartment::Resistant);
        const int T = spec_.horizon;

        for (PersonIndex x : model.initial_infected) {
            out_ << I << '(' << atom(x) << ",1).\n";
        }
        for (int t = 1; t <= T; ++t) {
            const auto transmissions = model.transmissions_into(t);
            for (PersonIndex x = 0; x < model.population(); ++x) {
                auto at = [&](const std::string& p, PersonIndex who, int step) {
                    return p + "(" + atom(who) + "," + std::to_string(step) + ")";
                };
                out_ << at(S, x, t) << ".\n";
                out_ << "\\+" << at(S, x, t) << " :- " << at(I, x, t) << ".\n";
                out_ << "\\+" << at(S, x, t) << " :- " << at(Res, x, t) << ".\n";
                if (t >= 2) {
                    out_ << prob(spec_.external_prob) << at(I, x, t) << " :- \\+" << at(I, x, t - 1) << ", "
                         << at(S, x, t - 1) << ".\n";
                    for (const Transmission& tr : transmissions) {
                        if (tr.target != x) continue;
                        out_ << prob(spec_.transmission_prob) << at(I, x, t) << " :- " << at(S, x, t - 1) << ", "
                             << at(I, tr.source, t - 1) << ".\n";
                    }
                    out_ << persistence_prefix() << at(I, x, t) << " :- " << at(I, x, t - 1) << ".\n";
                    if (spec_.infectious_period.bounded() && t - spec_.infectious_period.count() >= 1) {
                        out_ << "\\+" << at(I, x, t) << " :- " << at(I, x, t - spec_.infectious_period.count())
                             << ".\n";
                    }
                    out_ << at(Rec, x, t) << " :- " << at(I, x, t - 1) << ", \\+" << at(I, x, t) << ".\n";
                    out_ << at(Res, x, t) << " :- " << at(Res, x, t - 1) << ".\n";
                    if (spec_.immunity_period.bounded() && t - spec_.immunity_period.count() >= 1) {
                        const int k = t - spec_.immunity_period.count();
                        out_ << "\\+" << at(Res, x, t) << " :- " << at(Res, x, k) << ", " << at(Rec, x, k)
                             << ".\n";
                    }
                }
                out_ << prob(spec_.immunity_prob) << at(Res, x, t) << " :- " << at(Rec, x, t) << ".\n";
            }
        }
        out_ << '\n';
        for (Compartment c : spec_.queries) {
            for (PersonIndex x = 0; x < model.population(); ++x) {
                for (int t = 1; t <= T; ++t) {
                    out_ << "query(" << pred(c) << '(' << atom(x) << ',' << t << ")).\n";
                }
            }
        }
        return out_.str();
    }

private:
    std::string pred(Compartment c) const { return spec_.disease_name + "__" + std::string(to_string(c)); }
    std::string atom(PersonIndex x) const { return prolog_atom(graph_.id(x)); }
    static std::string prob(double p) { return format_probability(p) + "::"; }
    std::string persistence_prefix() const
    {
        return spec_.persistence_prob < 1.0 ? prob(spec_.persistence_prob) : std::string();
    }

    const ModelSpec& spec_;
    const TemporalContactGraph& graph_;
    std::ostringstream out_;
};

} // namespace

std::string emit_program(const ModelSpec& spec, const TemporalContactGraph& graph, EmitMode mode)
{
    Writer writer(spec, graph);
    return mode == EmitMode::Relational ? writer.relational() : writer.grounded();
}

} // namespace netepi
