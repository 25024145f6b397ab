// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "kgtrick/kgstore.hpp"

namespace kgtrick::testing {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("kgtrick-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

  fs::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline LanguageCode L(std::string_view code) { return LanguageCode(code); }

// Einstein -spouse-> Elsa Löwenthal.
inline KnowledgeGraph figure_one_graph() {
  GraphBuilder b;
  b.add_triplet("Q937", "P26", "Q68761");
  b.set_lexicalization("Q937", L("en"), {"Albert Einstein", {}, std::nullopt});
  b.set_lexicalization("Q937", L("de"), {"Albert Einstein", {}, "theoretischer Physiker"});
  b.set_lexicalization("Q937", L("es"), {"Albert Einstein", {}, "físico teórico"});
  b.set_lexicalization("Q68761", L("en"), {"Elsa Löwenthal", {"Elsa Einstein"}, "second wife of Albert Einstein"});
  b.set_lexicalization("Q68761", L("de"), {"Elsa Löwenthal", {}, std::nullopt});
  b.set_lexicalization("Q68761", L("es"), {"Elsa Löwenthal", {}, "segunda esposa de Albert Einstein"});
  b.set_relation_label("P26", L("en"), "spouse");
  b.set_relation_label("P26", L("de"), "Ehepartner");
  b.set_relation_label("P26", L("es"), "cónyuge");
  return std::move(b).freeze();
}

// Paris the city and Paris the prince of Troy.
inline KnowledgeGraph two_paris_graph(Tier city_tier = Tier::Head, Tier prince_tier = Tier::Torso) {
  GraphBuilder b;
  b.set_lexicalization("Q90", L("en"), {"Paris", {"City of Light"}, "capital of France"});
  b.set_lexicalization("Q167646", L("en"), {"Paris", {"Alexander"}, "prince of Troy"});
  b.set_lexicalization("Q90", L("fr"), {"Paris", {}, "capitale de la France"});
  b.set_lexicalization("Q167646", L("fr"), {"Pâris", {"Paris"}, std::nullopt});
  b.set_tier("Q90", city_tier);
  b.set_tier("Q167646", prince_tier);
  return std::move(b).freeze();
}

inline void add_biden(GraphBuilder& b) {
  b.set_lexicalization("Q6279", L("en"),
                       {"Joe Biden", {"Joseph R. Biden Jr.", "Joseph Robinette Biden Jr."}, "President of the United States"});
  b.set_lexicalization("Q6279", L("zh"), {"乔·拜登", {"乔·罗宾内特·拜登"}, std::nullopt});
  b.set_lexicalization("Q82955", L("en"), {"politician", {}, "person involved in politics"});
  b.set_lexicalization("Q82955", L("es"), {"político", {}, "persona involucrada en la política"});
  b.set_lexicalization("Q82955", L("zh"), {"政治家", {}, "从事政治活动的人"});
  b.add_triplet("Q6279", "P106", "Q82955");
  b.set_relation_label("P106", L("en"), "occupation");
}

inline KnowledgeGraph biden_graph() {
  GraphBuilder b;
  add_biden(b);
  return std::move(b).freeze();
}

struct WorldEntity {
  const char* qid;
  Tier tier;
  // en, es, de: name, description
  const char* names[3];
  const char* descs[3];
};

inline const std::vector<WorldEntity>& world_entities() {
  static const std::vector<WorldEntity> entities = {
      {"Q90", Tier::Head, {"Paris", "París", "Paris"}, {"capital of France", "capital de Francia", "Hauptstadt Frankreichs"}},
      {"Q167646", Tier::Tail, {"Paris", "Paris", "Paris"}, {"prince of Troy", "príncipe de Troya", "Prinz von Troja"}},
      {"Q142", Tier::Head, {"France", "Francia", "Frankreich"}, {"country in Western Europe", "país de Europa occidental", "Staat in Westeuropa"}},
      {"Q183", Tier::Head, {"Germany", "Alemania", "Deutschland"}, {"country in Central Europe", "país de Europa central", "Staat in Mitteleuropa"}},
      {"Q29", Tier::Head, {"Spain", "España", "Spanien"}, {"country in southwestern Europe", "país del suroeste de Europa", "Staat in Südwesteuropa"}},
      {"Q38", Tier::Head, {"Italy", "Italia", "Italien"}, {"country in Southern Europe", "país del sur de Europa", "Staat in Südeuropa"}},
      {"Q36", Tier::Torso, {"Poland", "Polonia", "Polen"}, {"country in Central Europe", "país de Europa central", "Staat in Mitteleuropa"}},
      {"Q30", Tier::Head, {"United States", "Estados Unidos", "Vereinigte Staaten"}, {"country in North America", "país de América del Norte", "Staat in Nordamerika"}},
      {"Q64", Tier::Head, {"Berlin", "Berlín", "Berlin"}, {"capital of Germany", "capital de Alemania", "Hauptstadt Deutschlands"}},
      {"Q2807", Tier::Torso, {"Madrid", "Madrid", "Madrid"}, {"capital of Spain", "capital de España", "Hauptstadt Spaniens"}},
      {"Q220", Tier::Torso, {"Rome", "Roma", "Rom"}, {"capital of Italy", "capital de Italia", "Hauptstadt Italiens"}},
      {"Q270", Tier::Torso, {"Warsaw", "Varsovia", "Warschau"}, {"capital of Poland", "capital de Polonia", "Hauptstadt Polens"}},
      {"Q456", Tier::Torso, {"Lyon", "Lyon", "Lyon"}, {"city in France", "ciudad de Francia", "Stadt in Frankreich"}},
      {"Q3012", Tier::Tail, {"Ulm", "Ulm", "Ulm"}, {"city in Germany", "ciudad de Alemania", "Stadt in Deutschland"}},
      {"Q937", Tier::Head, {"Albert Einstein", "Albert Einstein", "Albert Einstein"}, {"theoretical physicist", "físico teórico", "theoretischer Physiker"}},
      {"Q68761", Tier::Tail, {"Elsa Löwenthal", "Elsa Löwenthal", "Elsa Löwenthal"}, {"second wife of Albert Einstein", "segunda esposa de Albert Einstein", "zweite Ehefrau von Albert Einstein"}},
      {"Q7186", Tier::Head, {"Marie Curie", "Marie Curie", "Marie Curie"}, {"physicist and chemist", "física y química", "Physikerin und Chemikerin"}},
      {"Q169470", Tier::Torso, {"physicist", "físico", "Physiker"}, {"scientist who does research in physics", "científico que investiga en física", "Naturwissenschaftler der Physik"}},
      {"Q593644", Tier::Torso, {"chemist", "químico", "Chemiker"}, {"scientist trained in chemistry", "científico formado en química", "Naturwissenschaftler der Chemie"}},
      {"Q22647", Tier::Tail, {"Troy", "Troya", "Troja"}, {"ancient city in Anatolia", "antigua ciudad de Anatolia", "antike Stadt in Anatolien"}},
      {"Q159653", Tier::Tail, {"Priam", "Príamo", "Priamos"}, {"king of Troy", "rey de Troya", "König von Troja"}},
      {"Q6279", Tier::Head, {"Joe Biden", "Joe Biden", "Joe Biden"}, {"President of the United States", "presidente de los Estados Unidos", "Präsident der Vereinigten Staaten"}},
      {"Q82955", Tier::Torso, {"politician", "político", "Politiker"}, {"person involved in politics", "persona involucrada en la política", "Person, die politisch tätig ist"}},
  };
  return entities;
}

inline const std::vector<Triplet>& world_triplets() {
  static const std::vector<Triplet> triplets = {
      {"Q90", "P17", "Q142"},      {"Q167646", "P19", "Q22647"}, {"Q167646", "P22", "Q159653"},
      {"Q64", "P17", "Q183"},      {"Q2807", "P17", "Q29"},      {"Q220", "P17", "Q38"},
      {"Q270", "P17", "Q36"},      {"Q456", "P17", "Q142"},      {"Q3012", "P17", "Q183"},
      {"Q142", "P36", "Q90"},      {"Q183", "P36", "Q64"},       {"Q29", "P36", "Q2807"},
      {"Q38", "P36", "Q220"},      {"Q36", "P36", "Q270"},       {"Q142", "P47", "Q183"},
      {"Q142", "P47", "Q29"},      {"Q142", "P47", "Q38"},       {"Q183", "P47", "Q36"},
      {"Q937", "P26", "Q68761"},   {"Q937", "P19", "Q3012"},     {"Q937", "P106", "Q169470"},
      {"Q7186", "P106", "Q169470"}, {"Q7186", "P106", "Q593644"}, {"Q7186", "P19", "Q270"},
      {"Q6279", "P106", "Q82955"}, {"Q6279", "P27", "Q30"},
  };
  return triplets;
}

inline void add_world_labels(GraphBuilder& b) {
  struct Label {
    const char* pid;
    const char* text[3];
  };
  static const Label labels[] = {
      {"P17", {"country", "país", "Staat"}},
      {"P36", {"capital", "capital", "Hauptstadt"}},
      {"P47", {"shares border with", "comparte frontera con", "grenzt an"}},
      {"P26", {"spouse", "cónyuge", "Ehepartner"}},
      {"P19", {"place of birth", "lugar de nacimiento", "Geburtsort"}},
      {"P22", {"father", "padre", "Vater"}},
      {"P106", {"occupation", "ocupación", "Tätigkeit"}},
      {"P27", {"country of citizenship", "país de nacionalidad", "Staatsangehörigkeit"}},
  };
  const LanguageCode langs[3] = {L("en"), L("es"), L("de")};
  for (const auto& l : labels) {
    for (int i = 0; i < 3; ++i) b.set_relation_label(l.pid, langs[i], l.text[i]);
  }
}

inline KnowledgeGraph tiny_world() {
  GraphBuilder b(LanguageSet{"de", "en", "es"});
  for (const auto& t : world_triplets()) b.add_triplet(t.head, t.rel, t.tail);
  const LanguageCode langs[3] = {L("en"), L("es"), L("de")};
  for (const auto& e : world_entities()) {
    for (int i = 0; i < 3; ++i) b.set_lexicalization(e.qid, langs[i], {e.names[i], {}, e.descs[i]});
    b.set_tier(e.qid, e.tier);
  }
  b.set_lexicalization("Q6279", L("en"),
                       {"Joe Biden", {"Joseph R. Biden Jr.", "Joseph Robinette Biden Jr."}, "President of the United States"});
  b.set_lexicalization("Q30", L("en"), {"United States", {"USA", "United States of America"}, "country in North America"});
  b.set_lexicalization("Q29", L("es"), {"España", {"Reino de España"}, "país del suroeste de Europa"});
  add_world_labels(b);
  return std::move(b).freeze();
}

}  // namespace kgtrick::testing
