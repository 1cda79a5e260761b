import { Api, ApiError } from "./api";
import { PlayApp } from "./app";
import "./style.css";

// Bundle is served by the game service under /app; the API lives at the
// same origin one level up.
const api = new Api("..");
const root = document.getElementById("app");

async function attach(sessionId: string): Promise<void> {
  if (!root) return;
  const app = new PlayApp(root, api, sessionId);
  await app.start();
}

function newGameForm(): void {
  if (!root) return;
  root.replaceChildren();
  const form = document.createElement("form");
  form.className = "new-game";
  form.innerHTML = `
    <h1>mysteryforge</h1>
    <label>Victim <input name="victim" value="Albert Einstein" required></label>
    <label>Mode
      <select name="mode">
        <option value="wikimystery">wikimystery</option>
        <option value="data-agent">data-agent</option>
        <option value="linkpath">linkpath</option>
      </select>
    </label>
    <label>Seed <input name="seed" type="number" value="7"></label>
    <button type="submit">New case</button>
    <div class="banner"></div>
  `;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const banner = form.querySelector(".banner");
    try {
      const game = await api.createGame(
        String(data.get("victim")),
        String(data.get("mode")),
        Number(data.get("seed")),
      );
      const session = await api.createSession(game.game_id);
      const url = new URL(window.location.href);
      url.searchParams.set("session", session.session_id);
      window.history.pushState({}, "", url);
      await attach(session.session_id);
    } catch (error) {
      if (banner) {
        banner.textContent =
          error instanceof ApiError
            ? `${error.body.code}: ${error.body.message}`
            : String(error);
        banner.classList.add("visible");
      }
    }
  });
  root.append(form);
}

const sessionId = new URLSearchParams(window.location.search).get("session");
if (sessionId) {
  void attach(sessionId);
} else {
  newGameForm();
}
