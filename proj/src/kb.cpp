#include "rowcomp/kb.hpp"

#include <cmath>
#include <deque>
#include <fstream>

#include "rowcomp/errors.hpp"
#include "rowcomp/text.hpp"

namespace rowcomp {

ObjectValue ObjectValue::entityRef(EntityId e) {
    ObjectValue v;
    v.kind = ValueKind::Entity;
    v.entity = std::move(e);
    return v;
}

ObjectValue ObjectValue::numberValue(double d, std::string unit) {
    ObjectValue v;
    v.kind = ValueKind::Number;
    v.number = d;
    v.unit = std::move(unit);
    return v;
}

ObjectValue ObjectValue::stringValue(std::string s) {
    ObjectValue v;
    v.kind = ValueKind::String;
    v.text = std::move(s);
    return v;
}

ObjectValue ObjectValue::timeValue(std::string iso) {
    ObjectValue v;
    v.kind = ValueKind::Time;
    v.text = std::move(iso);
    return v;
}

bool ObjectValue::operator==(const ObjectValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case ValueKind::Entity: return entity == o.entity;
        case ValueKind::Number: return number == o.number && unit == o.unit;
        case ValueKind::String:
        case ValueKind::Time: return text == o.text;
    }
    return false;
}

namespace {
const std::set<EntityId> kEmptyEntitySet;
const std::set<PropertyId> kEmptyPropertySet;
}  // namespace

const std::string& KnowledgeBase::entityLabel(const EntityId& e) const {
    auto it = entities_.find(e);
    if (it == entities_.end()) throw UnknownIdError(e);
    return it->second.label;
}

const std::string& KnowledgeBase::propertyLabel(const PropertyId& p) const {
    auto it = properties_.find(p);
    if (it == properties_.end()) throw UnknownIdError(p);
    return it->second;
}

const std::vector<std::string>& KnowledgeBase::aliases(const EntityId& e) const {
    auto it = entities_.find(e);
    if (it == entities_.end()) throw UnknownIdError(e);
    return it->second.aliases;
}

std::optional<ObjectValue> KnowledgeBase::propertyLookup(const EntityId& e,
                                                         const PropertyId& p) const {
    if (!hasEntity(e)) throw UnknownIdError(e);
    if (!hasProperty(p)) throw UnknownIdError(p);
    auto it = triples_.find({e, p});
    if (it == triples_.end()) return std::nullopt;
    return it->second;
}

const std::set<EntityId>& KnowledgeBase::typesOf(const EntityId& e) const {
    if (!hasEntity(e)) throw UnknownIdError(e);
    auto it = types_.find(e);
    return it == types_.end() ? kEmptyEntitySet : it->second;
}

const std::set<EntityId>& KnowledgeBase::entitiesOfType(const EntityId& type) const {
    if (!hasEntity(type)) throw UnknownIdError(type);
    auto it = typeMembers_.find(type);
    return it == typeMembers_.end() ? kEmptyEntitySet : it->second;
}

std::set<EntityId> KnowledgeBase::typeClosure(const EntityId& e) const {
    std::set<EntityId> closed = typesOf(e);
    std::deque<EntityId> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        EntityId t = std::move(frontier.front());
        frontier.pop_front();
        auto it = subclassParents_.find(t);
        if (it == subclassParents_.end()) continue;
        for (const EntityId& parent : it->second) {
            if (closed.insert(parent).second) frontier.push_back(parent);
        }
    }
    return closed;
}

std::set<EntityId> KnowledgeBase::resolveLabel(const std::string& text) const {
    auto it = labelIndex_.find(normalizeText(text));
    return it == labelIndex_.end() ? std::set<EntityId>{} : it->second;
}

const std::set<PropertyId>& KnowledgeBase::propertiesOf(const EntityId& e) const {
    if (!hasEntity(e)) throw UnknownIdError(e);
    auto it = entityProps_.find(e);
    return it == entityProps_.end() ? kEmptyPropertySet : it->second;
}

std::string KnowledgeBase::renderValue(const ObjectValue& v) const {
    switch (v.kind) {
        case ValueKind::Entity: return entityLabel(v.entity);
        case ValueKind::Number:
            return v.unit.empty() ? formatNumber(v.number)
                                  : formatNumber(v.number) + " " + v.unit;
        case ValueKind::String:
        case ValueKind::Time: return v.text;
    }
    return {};
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::addEntity(EntityId id, std::string label,
                                                      std::vector<std::string> aliases) {
    if (id.empty()) throw ParseError("empty entity id");
    auto [it, inserted] = kb_.entities_.emplace(
        std::move(id), KnowledgeBase::EntityRecord{std::move(label), std::move(aliases)});
    if (!inserted) throw ParseError("duplicate entity declaration: " + it->first);
    kb_.labelIndex_[normalizeText(it->second.label)].insert(it->first);
    for (const std::string& alias : it->second.aliases) {
        kb_.labelIndex_[normalizeText(alias)].insert(it->first);
    }
    return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::addProperty(PropertyId id, std::string label) {
    if (id.empty()) throw ParseError("empty property id");
    auto [it, inserted] = kb_.properties_.emplace(std::move(id), std::move(label));
    if (!inserted) throw ParseError("duplicate property declaration: " + it->first);
    return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::addType(const EntityId& entity,
                                                    const EntityId& type) {
    if (!kb_.hasEntity(entity)) throw ParseError("dangling reference: " + entity);
    if (!kb_.hasEntity(type)) throw ParseError("dangling reference: " + type);
    kb_.types_[entity].insert(type);
    kb_.typeMembers_[type].insert(entity);
    return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::addSubclass(const EntityId& child,
                                                        const EntityId& parent) {
    if (!kb_.hasEntity(child)) throw ParseError("dangling reference: " + child);
    if (!kb_.hasEntity(parent)) throw ParseError("dangling reference: " + parent);
    kb_.subclassParents_[child].insert(parent);
    return *this;
}

KnowledgeBaseBuilder& KnowledgeBaseBuilder::addTriple(EntityId subject, PropertyId property,
                                                      ObjectValue object) {
    if (!kb_.hasEntity(subject)) throw ParseError("dangling reference: " + subject);
    if (!kb_.hasProperty(property)) throw ParseError("dangling reference: " + property);
    if (object.kind == ValueKind::Entity && !kb_.hasEntity(object.entity)) {
        throw ParseError("dangling reference: " + object.entity);
    }
    if (object.kind == ValueKind::Number && !std::isfinite(object.number)) {
        throw ParseError("non-finite number in triple for " + subject);
    }
    auto key = std::make_pair(std::move(subject), std::move(property));
    auto it = kb_.triples_.find(key);
    if (it != kb_.triples_.end()) {
        if (it->second != object) {
            throw ParseError("duplicate object for (" + key.first + ", " + key.second + ")");
        }
        return *this;
    }
    kb_.entityProps_[key.first].insert(key.second);
    kb_.triples_.emplace(std::move(key), std::move(object));
    return *this;
}

KnowledgeBase KnowledgeBaseBuilder::build() { return std::move(kb_); }

namespace {

ObjectValue parseTripleValue(const std::vector<std::string>& fields, std::size_t lineNo) {
    const std::string& kind = fields[3];
    const std::string& value = fields[4];
    if (kind == "e") return ObjectValue::entityRef(value);
    if (kind == "n") {
        std::size_t consumed = 0;
        double d = 0;
        try {
            d = std::stod(value, &consumed);
        } catch (const std::exception&) {
            throw ParseError("bad number: " + value, lineNo);
        }
        if (consumed != value.size()) throw ParseError("bad number: " + value, lineNo);
        return ObjectValue::numberValue(d, fields.size() > 5 ? fields[5] : "");
    }
    if (kind == "s") return ObjectValue::stringValue(value);
    if (kind == "t") return ObjectValue::timeValue(value);
    throw ParseError("unknown value kind: " + kind, lineNo);
}

}  // namespace

KnowledgeBase loadKb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    struct Record {
        std::size_t lineNo;
        std::vector<std::string> fields;
    };
    std::vector<Record> records;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        records.push_back({lineNo, splitString(line, '\t')});
    }

    KnowledgeBaseBuilder builder;
    auto apply = [&](const Record& rec, auto&& fn) {
        try {
            fn();
        } catch (const ParseError& e) {
            if (e.line()) throw;
            throw ParseError(e.what(), rec.lineNo);
        }
    };

    // Declarations first so record order in the file does not matter.
    for (const Record& rec : records) {
        const auto& f = rec.fields;
        if (f[0] == "E") {
            if (f.size() < 3) throw ParseError("entity record needs id and label", rec.lineNo);
            std::vector<std::string> aliases;
            if (f.size() > 3 && !f[3].empty()) aliases = splitString(f[3], '|');
            apply(rec, [&] { builder.addEntity(f[1], f[2], aliases); });
        } else if (f[0] == "P") {
            if (f.size() < 3) throw ParseError("property record needs id and label", rec.lineNo);
            apply(rec, [&] { builder.addProperty(f[1], f[2]); });
        } else if (f[0] != "T" && f[0] != "S" && f[0] != "C") {
            throw ParseError("unknown record type: " + f[0], rec.lineNo);
        }
    }
    for (const Record& rec : records) {
        const auto& f = rec.fields;
        if (f[0] == "T") {
            if (f.size() < 3) throw ParseError("type record needs entity and type", rec.lineNo);
            apply(rec, [&] { builder.addType(f[1], f[2]); });
        } else if (f[0] == "C") {
            if (f.size() < 3) throw ParseError("subclass record needs child and parent", rec.lineNo);
            apply(rec, [&] { builder.addSubclass(f[1], f[2]); });
        } else if (f[0] == "S") {
            if (f.size() < 5) throw ParseError("triple record needs subj, prop, kind, value", rec.lineNo);
            apply(rec, [&] { builder.addTriple(f[1], f[2], parseTripleValue(f, rec.lineNo)); });
        }
    }
    return builder.build();
}

void saveKb(const KnowledgeBase& kb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& [id, rec] : kb.entities()) {
        out << "E\t" << id << '\t' << rec.label;
        if (!rec.aliases.empty()) {
            out << '\t';
            for (std::size_t i = 0; i < rec.aliases.size(); ++i) {
                if (i) out << '|';
                out << rec.aliases[i];
            }
        }
        out << '\n';
    }
    for (const auto& [id, label] : kb.properties()) {
        out << "P\t" << id << '\t' << label << '\n';
    }
    for (const auto& [id, rec] : kb.entities()) {
        for (const EntityId& t : kb.typesOf(id)) out << "T\t" << id << '\t' << t << '\n';
    }
    for (const auto& [child, parents] : kb.subclassEdges()) {
        for (const EntityId& parent : parents) out << "C\t" << child << '\t' << parent << '\n';
    }
    for (const auto& [key, value] : kb.triples()) {
        out << "S\t" << key.first << '\t' << key.second << '\t';
        switch (value.kind) {
            case ValueKind::Entity: out << "e\t" << value.entity; break;
            case ValueKind::Number:
                out << "n\t" << formatNumber(value.number);
                if (!value.unit.empty()) out << '\t' << value.unit;
                break;
            case ValueKind::String: out << "s\t" << value.text; break;
            case ValueKind::Time: out << "t\t" << value.text; break;
        }
        out << '\n';
    }
}

}  // namespace rowcomp
