"""Sessions, login lockout, and the utility-menu operations."""

import pytest

from minibank.customers import SESSION_EXPIRED, SESSION_LOGGED_OUT, make_digest, verify_digest
from minibank.errors import AuthError, ConflictError, NotFoundError, NotOwnerError, ValidationError

from .conftest import DEMO_CUSTOMER


class TestDigest:
    def test_round_trip(self):
        stored = make_digest("sekret1", "pbkdf2-sha256", 1000)
        assert verify_digest("sekret1", stored)
        assert not verify_digest("sekret2", stored)

    def test_salts_differ_between_calls(self):
        assert make_digest("x", "pbkdf2-sha256", 10) != make_digest("x", "pbkdf2-sha256", 10)

    def test_clear_password_never_in_digest(self):
        stored = make_digest("hunter2hunter2", "pbkdf2-sha256", 1000)
        assert "hunter2" not in stored


class TestLogin:
    def test_demo_credentials(self, seeded):
        session = seeded.auth.login("user", "user")
        assert session.state == "active"
        assert seeded.auth.authenticate(session.token) == DEMO_CUSTOMER

    def test_wrong_password(self, seeded):
        with pytest.raises(AuthError) as e:
            seeded.auth.login("user", "wrong")
        assert e.value.code == "invalid-credentials"

    def test_unknown_user_same_code(self, seeded):
        """Unknown user and wrong password are indistinguishable."""
        with pytest.raises(AuthError) as unknown:
            seeded.auth.login("nobody", "whatever")
        with pytest.raises(AuthError) as wrong:
            seeded.auth.login("user", "wrong")
        assert unknown.value.code == wrong.value.code == "invalid-credentials"

    def test_lockout_after_five_failures(self, seeded):
        for _ in range(5):
            with pytest.raises(AuthError) as e:
                seeded.auth.login("user", "wrong")
            assert e.value.code == "invalid-credentials"
        # sixth consecutive failure hits the locked account
        with pytest.raises(AuthError) as e:
            seeded.auth.login("user", "wrong")
        assert e.value.code == "account-locked"
        # even the correct password is refused while locked
        with pytest.raises(AuthError) as e:
            seeded.auth.login("user", "user")
        assert e.value.code == "account-locked"

    def test_success_resets_failure_count(self, seeded):
        for _ in range(4):
            with pytest.raises(AuthError):
                seeded.auth.login("user", "wrong")
        seeded.auth.login("user", "user")
        for _ in range(4):
            with pytest.raises(AuthError):
                seeded.auth.login("user", "wrong")
        session = seeded.auth.login("user", "user")
        assert session.state == "active"

    def test_admin_unlock_restores_login(self, seeded):
        for _ in range(5):
            with pytest.raises(AuthError):
                seeded.auth.login("user", "wrong")
        seeded.admin.unlock_customer("user")
        assert seeded.auth.login("user", "user").state == "active"


class TestSessions:
    def test_logout_invalidates(self, seeded):
        session = seeded.auth.login("user", "user")
        seeded.auth.logout(session.token)
        with pytest.raises(AuthError) as e:
            seeded.auth.authenticate(session.token)
        assert e.value.code == "session-invalid"

    def test_logout_idempotent(self, seeded):
        session = seeded.auth.login("user", "user")
        seeded.auth.logout(session.token)
        seeded.auth.logout(session.token)  # no error
        assert seeded.sessions.state_of(session.token) == SESSION_LOGGED_OUT

    def test_logout_unknown_token(self, seeded):
        with pytest.raises(NotFoundError) as e:
            seeded.auth.logout("garbage")
        assert e.value.code == "unknown-token"

    def test_idle_expiry(self, seeded, clock):
        session = seeded.auth.login("user", "user")
        clock.advance(15 * 60 + 1)
        with pytest.raises(AuthError) as e:
            seeded.auth.authenticate(session.token)
        assert e.value.code == "session-expired"
        assert seeded.sessions.state_of(session.token) == SESSION_EXPIRED

    def test_activity_refreshes_idle_window(self, seeded, clock):
        session = seeded.auth.login("user", "user")
        for _ in range(3):
            clock.advance(10 * 60)
            assert seeded.auth.authenticate(session.token) == DEMO_CUSTOMER

    def test_all_dead_states_fail_authenticate(self, seeded, clock):
        """Exhaustive over the session machine: expired and logged-out never pass."""
        expired = seeded.auth.login("user", "user")
        clock.advance(16 * 60)
        with pytest.raises(AuthError):
            seeded.auth.authenticate(expired.token)
        logged_out = seeded.auth.login("user", "user")
        seeded.auth.logout(logged_out.token)
        for token in (expired.token, logged_out.token):
            with pytest.raises(AuthError):
                seeded.auth.authenticate(token)

    def test_token_unguessable_shape(self, seeded):
        tokens = {seeded.auth.login("user", "user").token for _ in range(5)}
        assert len(tokens) == 5
        assert all(len(t) == 64 for t in tokens)


class TestChangePassword:
    def test_round_trip(self, seeded):
        seeded.auth.change_password(DEMO_CUSTOMER, "user", "abc123", "abc123")
        assert seeded.auth.login("user", "abc123").state == "active"
        with pytest.raises(AuthError):
            seeded.auth.login("user", "user")

    def test_wrong_old_password(self, seeded):
        with pytest.raises(AuthError) as e:
            seeded.auth.change_password(DEMO_CUSTOMER, "nope", "abc123", "abc123")
        assert e.value.code == "old-password-incorrect"

    def test_confirmation_mismatch(self, seeded):
        with pytest.raises(ConflictError) as e:
            seeded.auth.change_password(DEMO_CUSTOMER, "user", "abc123", "abc124")
        assert e.value.code == "confirmation-mismatch"

    def test_policy_violation_on_short_password(self, seeded):
        with pytest.raises(ValidationError) as e:
            seeded.auth.change_password(DEMO_CUSTOMER, "user", "user", "user")
        assert e.value.code == "policy-violation"

    def test_other_sessions_revoked_caller_survives(self, seeded):
        keeper = seeded.auth.login("user", "user")
        other = seeded.auth.login("user", "user")
        seeded.auth.change_password(DEMO_CUSTOMER, "user", "abc123", "abc123",
                                    keep_token=keeper.token)
        assert seeded.auth.authenticate(keeper.token) == DEMO_CUSTOMER
        with pytest.raises(AuthError):
            seeded.auth.authenticate(other.token)

    def test_no_clear_password_in_durable_state(self, seeded):
        seeded.auth.change_password(DEMO_CUSTOMER, "user", "topsecret9", "topsecret9")
        state = seeded.state_bytes().decode("utf-8")
        assert "topsecret9" not in state
        assert "user@hotmail.com" in state  # sanity: state really is serialized


class TestProfileAndCards:
    def test_update_profile(self, seeded):
        seeded.auth.update_profile(DEMO_CUSTOMER, "New@Mail.example", "555", "2 Side St")
        profile = seeded.directory.get(DEMO_CUSTOMER)
        assert profile.email == "new@mail.example"
        assert profile.address == "2 Side St"

    def test_invalid_email_changes_nothing(self, seeded):
        before = seeded.directory.get(DEMO_CUSTOMER).email
        with pytest.raises(ValidationError):
            seeded.auth.update_profile(DEMO_CUSTOMER, "a@b", "x", "y")
        profile = seeded.directory.get(DEMO_CUSTOMER)
        assert profile.email == before
        assert profile.phone == "555-0100"

    def test_identical_resubmission_is_ok(self, seeded):
        profile = seeded.directory.get(DEMO_CUSTOMER)
        seeded.auth.update_profile(DEMO_CUSTOMER, profile.email, profile.phone,
                                   profile.address)
        assert seeded.directory.get(DEMO_CUSTOMER).email == profile.email

    def test_username_immutable_through_update(self, seeded):
        seeded.auth.update_profile(DEMO_CUSTOMER, "user@hotmail.com", "1", "2")
        assert seeded.directory.get(DEMO_CUSTOMER).username == "user"

    def test_cancel_card(self, seeded):
        seeded.auth.cancel_atm_card(DEMO_CUSTOMER, "CARD0001")
        assert seeded.directory.get(DEMO_CUSTOMER).atm_cards["CARD0001"] == "cancelled"

    def test_cancel_twice_rejected(self, seeded):
        seeded.auth.cancel_atm_card(DEMO_CUSTOMER, "CARD0001")
        with pytest.raises(ConflictError) as e:
            seeded.auth.cancel_atm_card(DEMO_CUSTOMER, "CARD0001")
        assert e.value.code == "already-cancelled"

    def test_cancel_other_customers_card(self, seeded):
        other = seeded.admin.add_customer("second", "pw12345", "s@x.example",
                                          "Second Person", cards=1)
        card_id = next(iter(seeded.directory.get(other.id).atm_cards))
        with pytest.raises(NotOwnerError):
            seeded.auth.cancel_atm_card(DEMO_CUSTOMER, card_id)

    def test_unknown_card(self, seeded):
        with pytest.raises(NotFoundError) as e:
            seeded.auth.cancel_atm_card(DEMO_CUSTOMER, "CARD9999")
        assert e.value.code == "unknown-card"
