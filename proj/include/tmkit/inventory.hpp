#ifndef TMKIT_INVENTORY_HPP
#define TMKIT_INVENTORY_HPP

#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tmkit/builder.hpp"
#include "tmkit/engine.hpp"
#include "tmkit/model.hpp"

// The inventory case study, twice over: plain domain operations used as the
// oracle for simulation traces, and build_inventory_model(), the same system
// encoded as a TM model (shipped textually as models/inventory.tm).

namespace tmkit::inventory {

struct InventoryError : std::domain_error {
  std::string code;
  InventoryError(std::string c, const std::string& msg)
      : std::domain_error(msg), code(std::move(c)) {}
};

// ---------------------------------------------------------------------------
// Stock arithmetic and request handling

struct Request {
  std::string id;
  std::string item = "Item";
  long quantity = 0;
  std::string origin;
  long pending_quantity = 0;  // 0 unless re-queued as a pending inquiry

  long outstanding() const {
    return pending_quantity > 0 ? pending_quantity : quantity;
  }
};

struct InventoryState {
  long current_stock = 0;
  long minimum = 0;
  long maximum = 0;
  std::deque<Request> queue;
  long pending_total = 0;
  long queued_count = 0;
};

enum class OutcomeKind { FullDelivery, PartialDelivery, Queued };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::FullDelivery: return "FullDelivery";
    case OutcomeKind::PartialDelivery: return "PartialDelivery";
    case OutcomeKind::Queued: return "Queued";
  }
  return "?";
}

struct Outcome {
  OutcomeKind kind = OutcomeKind::Queued;
  long delivered = 0;
  long enqueued_pending = 0;
};

struct Delivery {
  std::string vendor;
  long quantity = 0;
};

/// New stock is the current stock minus the requested quantity; may go
/// negative as an intermediate value, callers branch on it.
inline long compute_new_stock(long current, long requested) {
  return current - requested;
}

/// Split for the partial case: the available quantity is the current stock
/// minus the minimum, the pending quantity is the remainder of the request.
inline std::pair<long, long> partial_quantities(long current, long minimum,
                                                long requested) {
  if (!(current > minimum && compute_new_stock(current, requested) < minimum))
    throw InventoryError("PreconditionViolation",
                         "partial_quantities called outside the partial branch");
  long available = current - minimum;
  return {available, requested - available};
}

/// The three availability cases. Above the minimum with enough stock the
/// request is delivered in full; above the minimum without enough stock the
/// available part ships, the stock drops to the minimum and the remainder is
/// queued as a pending inquiry; at or below the minimum the whole request is
/// queued.
inline std::pair<InventoryState, Outcome> handle_request(InventoryState st,
                                                         Request req) {
  if (req.quantity <= 0)
    throw InventoryError("NonPositiveQuantity",
                         "request quantity must be positive");
  Outcome out;
  long asked = req.outstanding();
  if (st.current_stock > st.minimum) {
    long fresh = compute_new_stock(st.current_stock, asked);
    if (fresh >= st.minimum) {
      out.kind = OutcomeKind::FullDelivery;
      out.delivered = asked;
      st.current_stock = fresh;
      return {std::move(st), out};
    }
    auto [available, pending] = partial_quantities(st.current_stock, st.minimum, asked);
    out.kind = OutcomeKind::PartialDelivery;
    out.delivered = available;
    out.enqueued_pending = pending;
    st.current_stock = st.minimum;
    req.pending_quantity = pending;
    st.queue.push_back(std::move(req));
    st.pending_total += pending;
    st.queued_count += 1;
    return {std::move(st), out};
  }
  out.kind = OutcomeKind::Queued;
  out.enqueued_pending = asked;
  st.queue.push_back(std::move(req));
  st.pending_total += asked;
  st.queued_count += 1;
  return {std::move(st), out};
}

/// Adds the delivery to stock, then drains the queue front to back,
/// re-applying the availability check per request against the updated
/// state. A request that comes up unsatisfiable (stock at or below the
/// minimum) stops the drain with itself and everything behind it queued.
inline std::pair<InventoryState, std::vector<std::pair<Request, long>>>
receive_delivery(InventoryState st, const Delivery& d) {
  if (d.quantity <= 0)
    throw InventoryError("NonPositiveQuantity",
                         "delivery quantity must be positive");
  std::vector<std::pair<Request, long>> released;
  st.current_stock += d.quantity;
  while (!st.queue.empty()) {
    if (st.current_stock <= st.minimum) break;
    Request req = std::move(st.queue.front());
    st.queue.pop_front();
    long asked = req.outstanding();
    st.pending_total -= asked;
    st.queued_count -= 1;
    long fresh = compute_new_stock(st.current_stock, asked);
    if (fresh >= st.minimum) {
      st.current_stock = fresh;
      released.emplace_back(std::move(req), asked);
      continue;
    }
    auto [available, pending] = partial_quantities(st.current_stock, st.minimum, asked);
    st.current_stock = st.minimum;
    Request requeued = req;
    requeued.pending_quantity = pending;
    st.queue.push_back(std::move(requeued));
    st.pending_total += pending;
    st.queued_count += 1;
    released.emplace_back(std::move(req), available);
  }
  return {std::move(st), std::move(released)};
}

/// Order-up-to-maximum reorder quantity.
inline long reorder_quantity(const InventoryState& st) {
  return st.maximum - st.current_stock;
}

// ---------------------------------------------------------------------------
// RFQ approval workflow

enum class RfqPhase {
  Created,
  TeamLeaderReview,
  CancelledByTeamLeader,
  RejectedAwaitingModification,
  ManagerReview,
  CancelledByManager,
  RejectedByManagerAwaitingModification,
  BuyerDetailing,
  LtsaCreated,
  SentToVendor,
};

inline const char* to_string(RfqPhase p) {
  switch (p) {
    case RfqPhase::Created: return "Created";
    case RfqPhase::TeamLeaderReview: return "TeamLeaderReview";
    case RfqPhase::CancelledByTeamLeader: return "CancelledByTeamLeader";
    case RfqPhase::RejectedAwaitingModification: return "RejectedAwaitingModification";
    case RfqPhase::ManagerReview: return "ManagerReview";
    case RfqPhase::CancelledByManager: return "CancelledByManager";
    case RfqPhase::RejectedByManagerAwaitingModification: return "RejectedByManagerAwaitingModification";
    case RfqPhase::BuyerDetailing: return "BuyerDetailing";
    case RfqPhase::LtsaCreated: return "LtsaCreated";
    case RfqPhase::SentToVendor: return "SentToVendor";
  }
  return "?";
}

enum class RfqAction {
  SupervisorIssue,
  TeamLeaderCancel,
  TeamLeaderReject,
  SupervisorModify,
  TeamLeaderApprove,
  ManagerCancel,
  ManagerReject,
  ManagerApprove,
  BuyerDetail,
  CreateLtsa,
  SendToVendor,
};

inline constexpr std::array<RfqAction, 11> kAllRfqActions = {
    RfqAction::SupervisorIssue, RfqAction::TeamLeaderCancel,
    RfqAction::TeamLeaderReject, RfqAction::SupervisorModify,
    RfqAction::TeamLeaderApprove, RfqAction::ManagerCancel,
    RfqAction::ManagerReject, RfqAction::ManagerApprove,
    RfqAction::BuyerDetail, RfqAction::CreateLtsa, RfqAction::SendToVendor};

inline const char* to_string(RfqAction a) {
  switch (a) {
    case RfqAction::SupervisorIssue: return "SupervisorIssue";
    case RfqAction::TeamLeaderCancel: return "TeamLeaderCancel";
    case RfqAction::TeamLeaderReject: return "TeamLeaderReject";
    case RfqAction::SupervisorModify: return "SupervisorModify";
    case RfqAction::TeamLeaderApprove: return "TeamLeaderApprove";
    case RfqAction::ManagerCancel: return "ManagerCancel";
    case RfqAction::ManagerReject: return "ManagerReject";
    case RfqAction::ManagerApprove: return "ManagerApprove";
    case RfqAction::BuyerDetail: return "BuyerDetail";
    case RfqAction::CreateLtsa: return "CreateLtsa";
    case RfqAction::SendToVendor: return "SendToVendor";
  }
  return "?";
}

struct RfqNote {
  enum class Kind { Cancellation, Rejection, ApprovalCopy, LtsaCopy };
  Kind kind;
  std::string recipient;  // always the supervisor
};

struct RfqState {
  RfqPhase phase = RfqPhase::Created;
  std::string declared_buyer;
  bool details_complete = false;
  std::vector<RfqNote> notes;
};

inline bool rfq_action_enabled(const RfqState& st, RfqAction a) {
  switch (st.phase) {
    case RfqPhase::Created:
      return a == RfqAction::SupervisorIssue;
    case RfqPhase::TeamLeaderReview:
      return a == RfqAction::TeamLeaderCancel || a == RfqAction::TeamLeaderReject ||
             a == RfqAction::TeamLeaderApprove;
    case RfqPhase::RejectedAwaitingModification:
    case RfqPhase::RejectedByManagerAwaitingModification:
      return a == RfqAction::SupervisorModify;
    case RfqPhase::ManagerReview:
      return a == RfqAction::ManagerCancel || a == RfqAction::ManagerReject ||
             a == RfqAction::ManagerApprove;
    case RfqPhase::BuyerDetailing:
      return st.details_complete ? a == RfqAction::CreateLtsa
                                 : a == RfqAction::BuyerDetail;
    case RfqPhase::LtsaCreated:
      return a == RfqAction::SendToVendor;
    case RfqPhase::CancelledByTeamLeader:
    case RfqPhase::CancelledByManager:
    case RfqPhase::SentToVendor:
      return false;
  }
  return false;
}

inline std::vector<RfqAction> rfq_enabled_actions(const RfqState& st) {
  std::vector<RfqAction> out;
  for (RfqAction a : kAllRfqActions)
    if (rfq_action_enabled(st, a)) out.push_back(a);
  return out;
}

/// Cancellations and rejections leave a note to the supervisor, approvals
/// and the LTSA leave a copy. The manager's review cycle mirrors the team
/// leader's.
inline RfqState rfq_transition(RfqState st, RfqAction a) {
  if (!rfq_action_enabled(st, a))
    throw InventoryError("IllegalTransition",
                         std::string("action ") + to_string(a) +
                             " is not enabled in phase " + to_string(st.phase));
  auto note = [&](RfqNote::Kind k) { st.notes.push_back({k, "supervisor"}); };
  switch (a) {
    case RfqAction::SupervisorIssue:
      st.phase = RfqPhase::TeamLeaderReview;
      break;
    case RfqAction::TeamLeaderCancel:
      st.phase = RfqPhase::CancelledByTeamLeader;
      note(RfqNote::Kind::Cancellation);
      break;
    case RfqAction::TeamLeaderReject:
      st.phase = RfqPhase::RejectedAwaitingModification;
      note(RfqNote::Kind::Rejection);
      break;
    case RfqAction::SupervisorModify:
      st.phase = st.phase == RfqPhase::RejectedAwaitingModification
                     ? RfqPhase::TeamLeaderReview
                     : RfqPhase::ManagerReview;
      break;
    case RfqAction::TeamLeaderApprove:
      st.phase = RfqPhase::ManagerReview;
      note(RfqNote::Kind::ApprovalCopy);
      break;
    case RfqAction::ManagerCancel:
      st.phase = RfqPhase::CancelledByManager;
      note(RfqNote::Kind::Cancellation);
      break;
    case RfqAction::ManagerReject:
      st.phase = RfqPhase::RejectedByManagerAwaitingModification;
      note(RfqNote::Kind::Rejection);
      break;
    case RfqAction::ManagerApprove:
      st.phase = RfqPhase::BuyerDetailing;
      note(RfqNote::Kind::ApprovalCopy);
      break;
    case RfqAction::BuyerDetail:
      st.details_complete = true;
      break;
    case RfqAction::CreateLtsa:
      st.phase = RfqPhase::LtsaCreated;
      note(RfqNote::Kind::LtsaCopy);
      break;
    case RfqAction::SendToVendor:
      st.phase = RfqPhase::SentToVendor;
      break;
  }
  return st;
}

// ---------------------------------------------------------------------------
// The case study as a TM model

/// The request-handling, RFQ and replenishment machinery of the case study
/// as one TM model. Request events are named E1..E11; the replenishment
/// loop has its own family R1..R7 with R5/R6/R7 forming the parallel group
/// that must settle before the next round of the queue drain.
inline Model build_inventory_model() {
  ModelBuilder b;
  b.set_name("InventoryManagement");
  for (const char* t : {"Request", "Item", "RFQ", "LTSA", "Note"}) b.add_thing(t);
  for (const char* v :
       {"current_stock", "minimum", "maximum", "new_stock", "requested",
        "available", "pending", "pending_total", "queued_count", "reorder_qty"})
    b.add_var(v);

  using K = StageKind;
  auto machine = [&](const char* name, std::initializer_list<K> ks) {
    b.begin_machine(name);
    b.stages(ks);
    b.end_machine();
  };

  b.begin_machine("RequestingDepartment");
  machine("Orders", {K::Create, K::Release, K::Transfer});
  machine("Delivery", {K::Transfer, K::Receive});
  b.end_machine();

  b.begin_machine("CommercialDepartment");
  machine("Requests", {K::Transfer, K::Receive, K::Process, K::Release});
  b.end_machine();

  b.begin_machine("Inventory");
  machine("Check", {K::Transfer, K::Receive, K::Process});
  machine("Items", {K::Create, K::Release, K::Transfer});
  machine("PartialItems", {K::Create, K::Release, K::Transfer});
  machine("Shipping", {K::Create, K::Release, K::Transfer});
  machine("Receiving", {K::Transfer, K::Receive, K::Process});
  b.end_machine();

  b.begin_machine("DecisionMachine");
  machine("Calc", {K::Transfer, K::Receive, K::Process});
  machine("Partial", {K::Transfer, K::Receive, K::Process, K::Release});
  b.end_machine();

  b.begin_machine("QueueSystem");
  machine("Backlog", {K::Transfer, K::Receive, K::Process, K::Release});
  machine("Pending", {K::Transfer, K::Receive, K::Process, K::Release});
  machine("Drain", {K::Transfer, K::Receive, K::Process});
  machine("Rework", {K::Transfer, K::Receive, K::Process, K::Release});
  b.end_machine();

  b.begin_machine("Supervisor");
  machine("RfqDesk", {K::Create, K::Release, K::Transfer});
  machine("Inbox", {K::Transfer, K::Receive});
  b.end_machine();

  b.begin_machine("TeamLeader");
  machine("Review", {K::Transfer, K::Receive, K::Process, K::Release});
  machine("Notes", {K::Create, K::Release, K::Transfer});
  b.end_machine();

  b.begin_machine("Manager");
  machine("Review", {K::Transfer, K::Receive, K::Process, K::Release});
  machine("Notes", {K::Create, K::Release, K::Transfer});
  b.end_machine();

  b.begin_machine("DeclaredBuyer");
  machine("Detailing", {K::Transfer, K::Receive, K::Process});
  machine("Contracts", {K::Create, K::Release, K::Transfer});
  machine("Notes", {K::Create, K::Release, K::Transfer});
  b.end_machine();

  b.begin_machine("Vendor");
  machine("Shipment", {K::Create, K::Release, K::Transfer});
  machine("Contracts", {K::Transfer, K::Receive});
  b.end_machine();

  // An approved request flows from its department through the commercial
  // department into the inventory check, where the availability comparison
  // routes it onward.
  b.add_flow("Request",
             {"RequestingDepartment.Orders.create",
              "RequestingDepartment.Orders.release",
              "RequestingDepartment.Orders.transfer",
              "CommercialDepartment.Requests.transfer",
              "CommercialDepartment.Requests.receive",
              "CommercialDepartment.Requests.process",
              "CommercialDepartment.Requests.release",
              "CommercialDepartment.Requests.transfer",
              "Inventory.Check.transfer", "Inventory.Check.receive",
              "Inventory.Check.process"});
  b.add_flow("Request",
             {"DecisionMachine.Calc.transfer", "DecisionMachine.Calc.receive",
              "DecisionMachine.Calc.process"});
  b.add_flow("Request",
             {"DecisionMachine.Partial.transfer", "DecisionMachine.Partial.receive",
              "DecisionMachine.Partial.process", "DecisionMachine.Partial.release",
              "DecisionMachine.Partial.transfer", "QueueSystem.Pending.transfer"});
  b.add_flow("Request",
             {"QueueSystem.Backlog.transfer", "QueueSystem.Backlog.receive",
              "QueueSystem.Backlog.process", "QueueSystem.Backlog.release",
              "QueueSystem.Backlog.transfer", "QueueSystem.Pending.transfer"});
  b.add_flow("Request",
             {"QueueSystem.Pending.transfer", "QueueSystem.Pending.receive",
              "QueueSystem.Pending.process", "QueueSystem.Pending.release",
              "QueueSystem.Pending.transfer", "QueueSystem.Drain.transfer"});
  b.add_flow("Request",
             {"QueueSystem.Drain.transfer", "QueueSystem.Drain.receive",
              "QueueSystem.Drain.process"});
  b.add_flow("Request",
             {"QueueSystem.Rework.transfer", "QueueSystem.Rework.receive",
              "QueueSystem.Rework.process", "QueueSystem.Rework.release",
              "QueueSystem.Rework.transfer", "QueueSystem.Pending.transfer"});

  b.add_flow("Item",
             {"Inventory.Items.create", "Inventory.Items.release",
              "Inventory.Items.transfer", "RequestingDepartment.Delivery.transfer",
              "RequestingDepartment.Delivery.receive"});
  b.add_flow("Item",
             {"Inventory.Shipping.create", "Inventory.Shipping.release",
              "Inventory.Shipping.transfer",
              "RequestingDepartment.Delivery.transfer"});
  b.add_flow("Item",
             {"Inventory.PartialItems.create", "Inventory.PartialItems.release",
              "Inventory.PartialItems.transfer",
              "RequestingDepartment.Delivery.transfer"});
  b.add_flow("Item",
             {"Vendor.Shipment.create", "Vendor.Shipment.release",
              "Vendor.Shipment.transfer", "Inventory.Receiving.transfer",
              "Inventory.Receiving.receive", "Inventory.Receiving.process"});

  b.add_flow("RFQ",
             {"Supervisor.RfqDesk.create", "Supervisor.RfqDesk.release",
              "Supervisor.RfqDesk.transfer", "TeamLeader.Review.transfer",
              "TeamLeader.Review.receive", "TeamLeader.Review.process",
              "TeamLeader.Review.release", "TeamLeader.Review.transfer",
              "Manager.Review.transfer", "Manager.Review.receive",
              "Manager.Review.process", "Manager.Review.release",
              "Manager.Review.transfer", "DeclaredBuyer.Detailing.transfer",
              "DeclaredBuyer.Detailing.receive", "DeclaredBuyer.Detailing.process"});
  b.add_flow("LTSA",
             {"DeclaredBuyer.Contracts.create", "DeclaredBuyer.Contracts.release",
              "DeclaredBuyer.Contracts.transfer", "Vendor.Contracts.transfer",
              "Vendor.Contracts.receive"});
  b.add_flow("Note",
             {"TeamLeader.Notes.create", "TeamLeader.Notes.release",
              "TeamLeader.Notes.transfer", "Supervisor.Inbox.transfer",
              "Supervisor.Inbox.receive"});
  b.add_flow("Note",
             {"Manager.Notes.create", "Manager.Notes.release",
              "Manager.Notes.transfer", "Supervisor.Inbox.transfer"});
  b.add_flow("Note",
             {"DeclaredBuyer.Notes.create", "DeclaredBuyer.Notes.release",
              "DeclaredBuyer.Notes.transfer", "Supervisor.Inbox.transfer"});

  auto guard = [](const char* lhs, CmpOp cmp, const char* rhs) {
    Guard g;
    g.lhs = lhs;
    g.cmp = cmp;
    g.rhs_name = rhs;
    return g;
  };

  // The availability comparison (above / at-or-below minimum) and the
  // decision comparison (enough / not enough after subtraction).
  b.add_trigger("Inventory.Check.process", "DecisionMachine.Calc.transfer",
                guard("current_stock", CmpOp::Gt, "minimum"));
  b.add_trigger("Inventory.Check.process", "QueueSystem.Backlog.transfer",
                guard("current_stock", CmpOp::Le, "minimum"));
  b.add_trigger("DecisionMachine.Calc.process", "Inventory.Items.create",
                guard("new_stock", CmpOp::Ge, "minimum"));
  b.add_trigger("DecisionMachine.Calc.process", "DecisionMachine.Partial.transfer",
                guard("new_stock", CmpOp::Lt, "minimum"));
  b.add_trigger("DecisionMachine.Partial.process", "Inventory.PartialItems.create");
  b.add_trigger("DecisionMachine.Partial.process", "Supervisor.RfqDesk.create");

  // Queue drain: the delivery pulls the first pending request; each fully
  // shipped request pulls the next once its items have transferred out.
  b.add_trigger("QueueSystem.Drain.process", "Inventory.Shipping.create",
                guard("new_stock", CmpOp::Ge, "minimum"));
  b.add_trigger("QueueSystem.Drain.process", "QueueSystem.Rework.transfer",
                guard("new_stock", CmpOp::Lt, "minimum"));
  b.add_trigger("QueueSystem.Rework.process", "Inventory.PartialItems.create");
  b.add_trigger("Inventory.Receiving.process", "QueueSystem.Pending.release");
  b.add_trigger("Inventory.Shipping.transfer", "QueueSystem.Pending.release");

  // RFQ approvals leave copies with the supervisor; buyer detailing brings
  // the LTSA into existence.
  b.add_trigger("TeamLeader.Review.process", "TeamLeader.Notes.create");
  b.add_trigger("Manager.Review.process", "Manager.Notes.create");
  b.add_trigger("DeclaredBuyer.Detailing.process", "DeclaredBuyer.Contracts.create");
  b.add_trigger("DeclaredBuyer.Contracts.create", "DeclaredBuyer.Notes.create");

  auto set = [](const char* target, const char* src) {
    return Assignment{target, Operand::ref(src), 0, {}};
  };
  auto add2 = [](const char* target, const char* a, char op, const char* c) {
    return Assignment{target, Operand::ref(a), op, Operand::ref(c)};
  };
  auto bump = [](const char* target, char op, long n) {
    return Assignment{target, Operand::ref(target), op, Operand::lit(n)};
  };

  b.add_action("CommercialDepartment.Requests.process", {set("requested", "qty")});
  b.add_action("DecisionMachine.Calc.process",
               {add2("new_stock", "current_stock", '-', "requested")});
  b.add_action("Inventory.Items.create",
               {set("qty", "requested"), set("current_stock", "new_stock")});
  b.add_action("DecisionMachine.Partial.process",
               {add2("available", "current_stock", '-', "minimum"),
                add2("pending", "requested", '-', "available"),
                set("pending_qty", "pending")});
  b.add_action("Inventory.PartialItems.create",
               {set("qty", "available"), set("current_stock", "minimum")});
  b.add_action("QueueSystem.Backlog.process", {set("pending_qty", "qty")});
  b.add_action("QueueSystem.Pending.process",
               {bump("queued_count", '+', 1),
                add2("pending_total", "pending_total", '+', "pending_qty")});
  b.add_action("QueueSystem.Drain.process",
               {set("requested", "pending_qty"),
                add2("new_stock", "current_stock", '-', "pending_qty"),
                bump("queued_count", '-', 1),
                add2("pending_total", "pending_total", '-', "pending_qty")});
  b.add_action("QueueSystem.Rework.process",
               {add2("available", "current_stock", '-', "minimum"),
                add2("pending", "requested", '-', "available"),
                set("pending_qty", "pending")});
  b.add_action("Inventory.Shipping.create",
               {set("qty", "requested"), set("current_stock", "new_stock")});
  b.add_action("Inventory.Receiving.process",
               {add2("current_stock", "current_stock", '+', "qty")});
  b.add_action("Supervisor.RfqDesk.create",
               {add2("reorder_qty", "maximum", '-', "current_stock")});

  b.add_event("E1", "A request is received",
              {"CommercialDepartment.Requests.receive"});
  b.add_event("E2", "The inventory status is checked", {"Inventory.Check.process"});
  b.add_event("E3", "The current stock exceeds the minimum",
              {"DecisionMachine.Calc.transfer"});
  b.add_event("E4", "The request is sent to the decision procedure",
              {"DecisionMachine.Calc.receive"});
  b.add_event("E5", "The new stock is calculated", {"DecisionMachine.Calc.process"});
  b.add_event("E6", "The new stock is equal to or above the minimum",
              {"Inventory.Items.create"});
  b.add_event("E7", "Items are sent to the requester", {"Inventory.Items.release"});
  b.add_event("E8", "The new stock is less than the minimum",
              {"DecisionMachine.Partial.receive"});
  b.add_event("E9",
              "The available and pending quantities are calculated and the "
              "request is queued as a pending inquiry",
              {"DecisionMachine.Partial.process", "QueueSystem.Pending.process"});
  b.add_event("E10", "The quantity is equal to or less than the minimum",
              {"QueueSystem.Backlog.receive"});
  b.add_event("E11", "The request is added to the queue",
              {"QueueSystem.Backlog.process", "QueueSystem.Pending.process"});

  b.add_event("R1", "Ordered items are received from the vendor",
              {"Inventory.Receiving.receive"});
  b.add_event("R2", "The current stock is updated with the delivery",
              {"Inventory.Receiving.process"});
  b.add_event("R3", "A pending request is released from the queue",
              {"QueueSystem.Drain.transfer"});
  b.add_event("R4", "The released request is processed to extract its quantity",
              {"QueueSystem.Drain.process"});
  b.add_event("R5", "Items are released against the queued request",
              {"Inventory.Shipping.release"});
  b.add_event("R6", "The current stock is updated for the release",
              {"Inventory.Shipping.create"});
  b.add_event("R7", "The total pending items are updated",
              {"QueueSystem.Drain.process"});

  const char* edges[][2] = {
      {"E1", "E2"}, {"E2", "E3"}, {"E3", "E4"}, {"E4", "E5"}, {"E5", "E6"},
      {"E6", "E7"}, {"E5", "E8"}, {"E8", "E9"}, {"E2", "E10"}, {"E10", "E11"},
      {"R1", "R2"}, {"R2", "R3"}, {"R3", "R4"}, {"R4", "R5"}, {"R4", "R6"},
      {"R4", "R7"}};
  for (auto& e : edges) b.add_chrono_edge(e[0], e[1]);
  b.add_parallel_group({"R5", "R6", "R7"}, true);

  BuildResult built = b.build();
  if (!built.ok())
    throw InventoryError("ModelConstruction",
                         "inventory model failed to build: " +
                             built.issues.front().message);
  return std::move(*built.model);
}

// ---------------------------------------------------------------------------
// Summary of a finished simulation, for comparing against the oracle

struct SimSummary {
  long delivered = 0;                  // items that reached the requester
  std::vector<long> released;          // per delivery token, arrival order
  long queued = 0;                     // requests resting in the queue
  long stock = 0;
  long pending_total = 0;
};

inline SimSummary summarize(const SimState& st) {
  const Model& m = *st.model;
  SimSummary out;
  StageId delivered_at = m.find_stage("RequestingDepartment.Delivery.receive");
  for (const SimToken& t : st.queues[delivered_at]) {
    out.released.push_back(t.field("qty"));
    out.delivered += t.field("qty");
  }
  StageId queue_at = m.find_stage("QueueSystem.Pending.release");
  out.queued = static_cast<long>(st.queues[queue_at].size());
  out.stock = st.var("current_stock");
  out.pending_total = st.var("pending_total");
  return out;
}

}  // namespace tmkit::inventory

#endif  // TMKIT_INVENTORY_HPP
