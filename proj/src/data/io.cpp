#include "casino/data/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "casino/errors.hpp"
#include "json.hpp"

namespace casino {

using nlohmann::json;

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "users.jsonl", dir / "groups.jsonl", dir / "events.jsonl", dir / "rsvps.jsonl"};
}

namespace {

void for_each_record(const std::filesystem::path& path, const std::function<void(const json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& ex) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": parse error: " << ex.what();
      throw ValidationError(os.str(), {os.str()});
    }
  }
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

void write_lines(const std::filesystem::path& path, const std::vector<json>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file: " + path.string());
  for (const json& r : rows) out << r.dump() << '\n';
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
  std::vector<User> users;
  std::vector<Group> groups;
  std::vector<Event> events;
  std::vector<Rsvp> rsvps;

  for_each_record(paths.users, [&](const json& j) {
    users.push_back({j.at("user_id").get<std::string>(),
                     {j.at("lat").get<double>(), j.at("lon").get<double>()},
                     string_list(j, "groups")});
  });
  for_each_record(paths.groups, [&](const json& j) {
    groups.push_back({j.at("group_id").get<std::string>(), j.at("category").get<std::string>(),
                      j.at("organizer_id").get<std::string>(), string_list(j, "members")});
  });
  for_each_record(paths.events, [&](const json& j) {
    events.push_back({j.at("event_id").get<std::string>(), j.at("group_id").get<std::string>(),
                      {j.at("lat").get<double>(), j.at("lon").get<double>()},
                      j.at("start_time").get<Timestamp>(), j.at("announce_time").get<Timestamp>(),
                      j.at("title").get<std::string>(), j.at("description").get<std::string>()});
  });
  for_each_record(paths.rsvps, [&](const json& j) {
    rsvps.push_back({j.at("event_id").get<std::string>(), j.at("user_id").get<std::string>(),
                     j.at("rsvp_time").get<Timestamp>()});
  });
  return Dataset::build(std::move(users), std::move(groups), std::move(events), std::move(rsvps));
}

void write_dataset(const Dataset& d, const DatasetPaths& paths) {
  std::vector<json> rows;
  for (const User& u : d.users())
    rows.push_back({{"user_id", u.id}, {"lat", u.home.lat}, {"lon", u.home.lon}, {"groups", u.groups}});
  write_lines(paths.users, rows);

  rows.clear();
  for (const Group& g : d.groups())
    rows.push_back({{"group_id", g.id}, {"category", g.category}, {"organizer_id", g.organizer_id},
                    {"members", g.members}});
  write_lines(paths.groups, rows);

  rows.clear();
  for (const Event& e : d.events())
    rows.push_back({{"event_id", e.id}, {"group_id", e.group_id}, {"lat", e.venue.lat}, {"lon", e.venue.lon},
                    {"start_time", e.start_time}, {"announce_time", e.announce_time}, {"title", e.title},
                    {"description", e.description}});
  write_lines(paths.events, rows);

  rows.clear();
  for (const Rsvp& r : d.rsvps())
    rows.push_back({{"event_id", r.event_id}, {"user_id", r.user_id}, {"rsvp_time", r.rsvp_time}});
  write_lines(paths.rsvps, rows);
}

}  // namespace casino
