import { ApiClient } from "./client.js";
import { systemClock, type Clock } from "./clock.js";
import { RewardTimer } from "./rewardTimer.js";
import { StudentScreen, starRow } from "./student.js";
import { TeacherScreens } from "./teacher.js";
import {
  initialViewState,
  navigate,
  rewardFinished,
  sessionStarted,
  type Route,
  type ViewState,
} from "./viewState.js";

const HEARTBEAT_MS = 15_000;
const REWARD_CLIP = "assets/big_buck_bunny.mp4";

export class App {
  state: ViewState = initialViewState();
  private readonly student: StudentScreen;
  private readonly teacher: TeacherScreens;
  private readonly rewardTimer: RewardTimer;
  private rewardRemainingS = 0;
  private heartbeatId: number | null = null;

  constructor(
    private readonly root: HTMLElement,
    readonly api: ApiClient,
    private readonly clock: Clock = systemClock,
  ) {
    this.student = new StudentScreen(this, api);
    this.teacher = new TeacherScreens(this, api);
    this.rewardTimer = new RewardTimer(clock, {
      onTick: (s) => {
        this.rewardRemainingS = s;
        this.rerender();
      },
      onFinish: () => this.update(rewardFinished(this.state)),
    });
  }

  update(next: ViewState): void {
    const prev = this.state;
    this.state = next;
    if (next.route === "reward" && prev.route !== "reward" && next.rewardCapS) {
      this.rewardTimer.start(next.rewardCapS);
    }
    if (next.route !== "reward") this.rewardTimer.stop();
    this.syncHeartbeat();
    this.rerender();
  }

  goTo(route: Route): void {
    if (route === "student" && !this.state.sessionId) {
      void this.api
        .startSession()
        .then((sessionId) => this.update(sessionStarted(this.state, sessionId)))
        .catch(() => this.showRetryBanner(() => this.goTo("student")));
      return;
    }
    this.update(navigate(this.state, route));
  }

  // Heartbeats fire whenever a session is live, including on the reward
  // screen: reward viewing counts as engagement.
  private syncHeartbeat(): void {
    const shouldRun =
      this.state.sessionId !== null &&
      (this.state.route === "student" || this.state.route === "reward");
    if (shouldRun && this.heartbeatId === null) {
      this.heartbeatId = this.clock.setInterval(() => {
        if (this.state.sessionId) void this.api.heartbeat(this.state.sessionId).catch(() => undefined);
      }, HEARTBEAT_MS);
    } else if (!shouldRun && this.heartbeatId !== null) {
      this.clock.clearInterval(this.heartbeatId);
      this.heartbeatId = null;
    }
  }

  showRetryBanner(retry: () => void): void {
    const banner = document.createElement("div");
    banner.className = "retry-banner";
    banner.textContent = "Connection problem. ";
    const button = document.createElement("button");
    button.className = "big-button";
    button.textContent = "Try again";
    button.onclick = () => {
      banner.remove();
      retry();
    };
    banner.appendChild(button);
    this.root.prepend(banner);
  }

  rerender(): void {
    this.root.innerHTML = "";
    const screen = document.createElement("main");
    screen.className = `screen route-${this.state.route}`;
    this.root.appendChild(screen);

    switch (this.state.route) {
      case "home":
        this.renderHome(screen);
        break;
      case "teacher-gate":
        this.teacher.renderGate(screen);
        break;
      case "teacher-list":
        this.teacher.renderList(screen);
        break;
      case "teacher-edit":
        this.teacher.renderEdit(screen);
        break;
      case "student":
        this.student.render(screen);
        break;
      case "reward":
        this.renderReward(screen);
        break;
    }

    this.root.appendChild(this.navBar());
  }

  private renderHome(root: HTMLElement): void {
    const title = document.createElement("h1");
    title.textContent = "ABA Tutor";
    root.appendChild(title);
    const hint = document.createElement("p");
    hint.textContent = "Pick Student to practice, or Teacher to add questions.";
    root.appendChild(hint);
  }

  private renderReward(root: HTMLElement): void {
    const banner = document.createElement("h1");
    banner.textContent = "You earned 5 tokens!";
    root.appendChild(banner);

    const countdown = document.createElement("div");
    countdown.className = "countdown";
    countdown.textContent = `${this.rewardRemainingS}`;
    root.appendChild(countdown);

    const video = document.createElement("video");
    video.className = "reward-video";
    video.src = REWARD_CLIP;
    video.autoplay = true;
    video.onerror = () => {
      // Missing clip: static celebration for the same capped duration.
      video.replaceWith(Object.assign(document.createElement("div"), {
        className: "celebration",
        textContent: "🎉 ⭐ 🎉",
      }));
    };
    root.appendChild(video);

    const stars = document.createElement("div");
    stars.className = "star-row";
    stars.textContent = starRow(5);
    root.appendChild(stars);
  }

  // Navigation menu, always in the same place at the bottom of the screen.
  private navBar(): HTMLElement {
    const nav = document.createElement("nav");
    nav.className = "nav-bar";
    const entries: Array<[string, Route]> = [
      ["Home", "home"],
      ["Teacher", "teacher-list"],
      ["Student", "student"],
    ];
    for (const [label, route] of entries) {
      const button = document.createElement("button");
      button.className = "big-button nav-button";
      button.textContent = label;
      button.onclick = () => this.goTo(route);
      nav.appendChild(button);
    }
    return nav;
  }
}
