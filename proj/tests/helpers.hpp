#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rowcomp/embed.hpp"
#include "rowcomp/kb.hpp"

namespace helpers {

inline std::string fixturePath(const std::string& name) {
    return std::string(ROWCOMP_FIXTURE_DIR) + "/" + name;
}

// Writes content to a throwaway file and deletes it on scope exit.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& content, const std::string& suffix = ".txt") {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("rowcomp_test_" + std::to_string(++counter) + suffix);
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

// Small rapper world mirroring the bundled KB fixture: three seed entities
// plus suggestion candidates, typed human + rapper.
inline rowcomp::KnowledgeBase rapperKb() {
    using rowcomp::ObjectValue;
    rowcomp::KnowledgeBaseBuilder b;
    b.addEntity("Q100", "human");
    b.addEntity("Q101", "rapper");
    b.addEntity("Q102", "musician");
    b.addProperty("P1", "pseudonym");
    b.addProperty("P2", "date of birth");
    b.addProperty("P3", "height");
    b.addProperty("P4", "record label");
    b.addEntity("Q1", "Kanye West", {"Ye"});
    b.addEntity("Q2", "Kendrick Lamar", {"K-Dot"});
    b.addEntity("Q3", "Drake", {"Drizzy"});
    b.addEntity("Q4", "Eminem", {"Slim Shady"});
    b.addEntity("Q5", "Jay-Z", {"Hova"});
    b.addEntity("Q6", "Nas");
    b.addSubclass("Q101", "Q102");
    const char* pseudonyms[] = {"Yeezy", "K-Dot", "Drizzy", "Slim Shady", "Hova", "Nasty Nas"};
    double dobs[] = {1977, 1987, 1986, 1972, 1969, 1973};
    for (int i = 0; i < 6; ++i) {
        std::string id = "Q" + std::to_string(i + 1);
        b.addType(id, "Q100");
        b.addType(id, "Q101");
        b.addTriple(id, "P1", ObjectValue::stringValue(pseudonyms[i]));
        b.addTriple(id, "P2", ObjectValue::numberValue(dobs[i]));
    }
    return b.build();
}

// Cosine index over the rapper world; the six rappers form one tight cluster.
inline rowcomp::EmbeddingIndex rapperIndex() {
    rowcomp::EmbeddingIndex idx(4, rowcomp::Metric::Cosine);
    idx.add("Q1", {1.0, 0.00, 0.1, 0.0});
    idx.add("Q2", {1.0, 0.05, 0.1, 0.0});
    idx.add("Q3", {1.0, 0.10, 0.1, 0.0});
    idx.add("Q4", {1.0, 0.15, 0.1, 0.0});
    idx.add("Q5", {1.0, 0.20, 0.1, 0.0});
    idx.add("Q6", {1.0, 0.25, 0.1, 0.0});
    return idx;
}

}  // namespace helpers
