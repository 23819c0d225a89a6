#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rowcomp {

using EntityId = std::string;
using PropertyId = std::string;

enum class ValueKind { Entity, Number, String, Time };

struct ObjectValue {
    ValueKind kind = ValueKind::String;
    EntityId entity;       // Entity
    double number = 0;     // Number
    std::string unit;      // Number, may be empty
    std::string text;      // String / Time (ISO-8601 date)

    static ObjectValue entityRef(EntityId e);
    static ObjectValue numberValue(double v, std::string unit = "");
    static ObjectValue stringValue(std::string s);
    static ObjectValue timeValue(std::string iso);

    bool operator==(const ObjectValue& o) const;
    bool operator!=(const ObjectValue& o) const { return !(*this == o); }
};

struct Triple {
    EntityId subject;
    PropertyId property;
    ObjectValue object;
};

// Immutable triple store. Build with KnowledgeBaseBuilder or loadKb; safe to
// share across threads once built.
class KnowledgeBase {
public:
    struct EntityRecord {
        std::string label;
        std::vector<std::string> aliases;

        bool operator==(const EntityRecord&) const = default;
    };

    bool hasEntity(const EntityId& e) const { return entities_.count(e) != 0; }
    bool hasProperty(const PropertyId& p) const { return properties_.count(p) != 0; }

    std::size_t entityCount() const { return entities_.size(); }
    std::size_t tripleCount() const { return triples_.size(); }

    const std::string& entityLabel(const EntityId& e) const;
    const std::string& propertyLabel(const PropertyId& p) const;
    const std::vector<std::string>& aliases(const EntityId& e) const;

    // Unique object of <e,p,.> or nullopt. Throws UnknownIdError for
    // unregistered ids.
    std::optional<ObjectValue> propertyLookup(const EntityId& e, const PropertyId& p) const;

    // Directly asserted types only; hierarchy closure is typeClosure().
    const std::set<EntityId>& typesOf(const EntityId& e) const;
    const std::set<EntityId>& entitiesOfType(const EntityId& type) const;

    // typesOf plus transitive subclass-of parents.
    std::set<EntityId> typeClosure(const EntityId& e) const;

    // Entities whose label or any alias matches under case-insensitive,
    // whitespace-collapsed comparison.
    std::set<EntityId> resolveLabel(const std::string& text) const;

    // Properties held by entity e (sorted).
    const std::set<PropertyId>& propertiesOf(const EntityId& e) const;

    const std::map<EntityId, EntityRecord>& entities() const { return entities_; }
    const std::map<PropertyId, std::string>& properties() const { return properties_; }
    const std::map<std::pair<EntityId, PropertyId>, ObjectValue>& triples() const {
        return triples_;
    }
    const std::map<EntityId, std::set<EntityId>>& subclassEdges() const {
        return subclassParents_;
    }

    // Entity objects render as their label; numbers keep their unit suffix.
    std::string renderValue(const ObjectValue& v) const;

private:
    friend class KnowledgeBaseBuilder;

    std::map<EntityId, EntityRecord> entities_;
    std::map<PropertyId, std::string> properties_;
    std::map<EntityId, std::set<EntityId>> types_;
    std::map<EntityId, std::set<EntityId>> typeMembers_;
    std::map<EntityId, std::set<EntityId>> subclassParents_;
    std::map<std::pair<EntityId, PropertyId>, ObjectValue> triples_;
    std::map<EntityId, std::set<PropertyId>> entityProps_;
    std::map<std::string, std::set<EntityId>> labelIndex_;
};

class KnowledgeBaseBuilder {
public:
    KnowledgeBaseBuilder& addEntity(EntityId id, std::string label,
                                    std::vector<std::string> aliases = {});
    KnowledgeBaseBuilder& addProperty(PropertyId id, std::string label);
    KnowledgeBaseBuilder& addType(const EntityId& entity, const EntityId& type);
    KnowledgeBaseBuilder& addSubclass(const EntityId& child, const EntityId& parent);
    // Rejects a second distinct object for the same (subject, property).
    KnowledgeBaseBuilder& addTriple(EntityId subject, PropertyId property, ObjectValue object);

    KnowledgeBase build();

private:
    KnowledgeBase kb_;
};

// KB TSV format (one record per line, UTF-8, '#' comments):
//   E <id> <label> [alias1|alias2|...]
//   T <id> <type-id>
//   C <child-type> <parent-type>         (subclass-of edge)
//   P <id> <label>
//   S <subj> <prop> <kind> <value> [unit]   kind in {e,n,s,t}
KnowledgeBase loadKb(const std::string& path);

void saveKb(const KnowledgeBase& kb, const std::string& path);

}  // namespace rowcomp
